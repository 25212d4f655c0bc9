#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "latcomm/babai_subdivision.hpp"
#include "latcomm/entropy.hpp"
#include "latcomm/geometry.hpp"
#include "latcomm/partition.hpp"

namespace latcomm {

enum class Party { node1, node2 };

/// Value of the target function once both parties know it.
enum class Outcome { zero, one, undecided };

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// What both parties know after `step` messages: the admissible interval of
/// each input. These are functions of the transcript alone.
struct ProtocolState {
  Interval x1_set;
  Interval x2_set;
  std::size_t step = 0;
};

/// Speaker's interval is cut at `cuts` (strictly increasing, interior); the
/// symbol sent is the index of the piece holding the speaker's input, with
/// pieces half-open on the right.
struct Message {
  Party speaker = Party::node1;
  std::vector<double> cuts;

  std::size_t alphabet_size() const { return cuts.size() + 1; }
};

struct Decision {
  Outcome value = Outcome::undecided;
};

using Move = std::variant<Decision, Message>;

/// Interactive two-party protocol, given implicitly by a rule that maps the
/// public state to the next move. Node1 speaks at odd steps (1, 3, ...),
/// node2 at even steps. Because the rule only sees the public state and the
/// speaker's piece is selected by the speaker's own input, every message
/// depends on the transcript and one private input only.
class ProtocolTree {
 public:
  using Rule = std::function<Move(const ProtocolState&)>;

  /// `scale_invariant` promises that the subtree below a state depends only
  /// on the step and on the state's intervals after a common affine
  /// normalization; entropy computations may then share work between states.
  ProtocolTree(std::string name, Rect domain, std::size_t max_rounds, Rule rule,
               bool scale_invariant = false)
      : name_(std::move(name)),
        domain_(domain),
        max_rounds_(max_rounds),
        rule_(std::move(rule)),
        scale_invariant_(scale_invariant) {
    if (!domain_.non_degenerate()) throw std::invalid_argument("protocol: empty domain");
  }

  const std::string& name() const { return name_; }
  const Rect& domain() const { return domain_; }
  std::size_t max_rounds() const { return max_rounds_; }
  bool scale_invariant() const { return scale_invariant_; }

  ProtocolState root() const {
    return {{domain_.x_lo, domain_.x_hi}, {domain_.y_lo, domain_.y_hi}, 0};
  }

  /// Next move with the depth cap applied and the message checked.
  Move next(const ProtocolState& s) const {
    if (s.step >= 2 * max_rounds_) {
      Move m = rule_(s);
      if (std::holds_alternative<Decision>(m)) return m;
      return Decision{Outcome::undecided};
    }
    Move m = rule_(s);
    if (const auto* msg = std::get_if<Message>(&m)) {
      const Party expected = s.step % 2 == 0 ? Party::node1 : Party::node2;
      if (msg->speaker != expected) {
        throw std::logic_error("protocol '" + name_ + "': speakers must alternate starting with node1");
      }
      const Interval& iv = msg->speaker == Party::node1 ? s.x1_set : s.x2_set;
      double prev = iv.lo;
      for (double c : msg->cuts) {
        if (!(c > prev && c < iv.hi)) {
          throw std::logic_error("protocol '" + name_ + "': message cuts must partition the interval");
        }
        prev = c;
      }
    }
    return m;
  }

 private:
  std::string name_;
  Rect domain_;
  std::size_t max_rounds_;
  Rule rule_;
  bool scale_invariant_;
};

/// Interval of the `symbol`-th piece.
inline Interval piece(const Interval& iv, const std::vector<double>& cuts, std::size_t symbol) {
  return {symbol == 0 ? iv.lo : cuts[symbol - 1], symbol == cuts.size() ? iv.hi : cuts[symbol]};
}

inline ProtocolState child_state(const ProtocolState& s, const Message& m, std::size_t symbol) {
  ProtocolState c = s;
  if (m.speaker == Party::node1) {
    c.x1_set = piece(s.x1_set, m.cuts, symbol);
  } else {
    c.x2_set = piece(s.x2_set, m.cuts, symbol);
  }
  ++c.step;
  return c;
}

struct Transcript {
  std::vector<std::size_t> symbols;
  std::vector<std::size_t> alphabet_sizes;
  Outcome output = Outcome::undecided;

  std::size_t stopping_time() const { return symbols.size(); }
  std::size_t rounds() const { return (symbols.size() + 1) / 2; }

  /// Fixed-length cost: ceil(log2 |alphabet|) bits per message.
  std::size_t bits() const {
    std::size_t b = 0;
    for (std::size_t a : alphabet_sizes) {
      std::size_t w = 0;
      while ((std::size_t{1} << w) < a) ++w;
      b += w;
    }
    return b;
  }
};

/// Runs the protocol on one input pair. Each message is computed from the
/// public state and the speaker's own input only.
inline Transcript run_protocol(const ProtocolTree& tree, double x1, double x2) {
  const Rect& d = tree.domain();
  if (!(x1 > d.x_lo && x1 < d.x_hi && x2 > d.y_lo && x2 < d.y_hi)) {
    throw std::domain_error("run_protocol: input outside the open domain of '" + tree.name() + "'");
  }
  Transcript t;
  ProtocolState s = tree.root();
  for (;;) {
    Move m = tree.next(s);
    if (const auto* dec = std::get_if<Decision>(&m)) {
      t.output = dec->value;
      return t;
    }
    const auto& msg = std::get<Message>(m);
    const double own = msg.speaker == Party::node1 ? x1 : x2;
    const auto symbol = static_cast<std::size_t>(
        std::upper_bound(msg.cuts.begin(), msg.cuts.end(), own) - msg.cuts.begin());
    t.symbols.push_back(symbol);
    t.alphabet_sizes.push_back(msg.alphabet_size());
    s = child_state(s, msg, symbol);
  }
}

struct ProtocolLeaf {
  Rect rect;  ///< in domain coordinates
  Outcome outcome = Outcome::undecided;
  std::size_t messages = 0;
};

/// All leaves, depth first in symbol order.
inline std::vector<ProtocolLeaf> enumerate_leaves(const ProtocolTree& tree) {
  std::vector<ProtocolLeaf> out;
  std::vector<ProtocolState> stack{tree.root()};
  while (!stack.empty()) {
    const ProtocolState s = stack.back();
    stack.pop_back();
    Move m = tree.next(s);
    if (const auto* dec = std::get_if<Decision>(&m)) {
      out.push_back({{s.x1_set.lo, s.x1_set.hi, s.x2_set.lo, s.x2_set.hi}, dec->value, s.step});
      continue;
    }
    const auto& msg = std::get<Message>(m);
    for (std::size_t k = msg.alphabet_size(); k-- > 0;) stack.push_back(child_state(s, msg, k));
  }
  return out;
}

/// One rectangle per leaf, rescaled from the protocol domain onto the unit
/// square. Outcome one is labeled p, zero q, undecided u.
inline LabeledPartition induced_partition(const ProtocolTree& tree) {
  const Rect& d = tree.domain();
  auto sx = [&](double x) { return (x - d.x_lo) / d.width(); };
  auto sy = [&](double y) { return (y - d.y_lo) / d.height(); };
  LabeledPartition part;
  for (const auto& leaf : enumerate_leaves(tree)) {
    const CellLabel label = leaf.outcome == Outcome::one    ? CellLabel::p
                            : leaf.outcome == Outcome::zero ? CellLabel::q
                                                            : CellLabel::undecided;
    part.cells.push_back(
        {{sx(leaf.rect.x_lo), sx(leaf.rect.x_hi), sy(leaf.rect.y_lo), sy(leaf.rect.y_hi)}, label});
  }
  return part;
}

namespace detail {

using StateKey = std::tuple<double, double, double, double, std::size_t>;

inline StateKey normalized_key(const ProtocolState& s) {
  const double a = std::min(s.x1_set.lo, s.x2_set.lo);
  const double w = std::max(s.x1_set.hi, s.x2_set.hi) - a;
  return {(s.x1_set.lo - a) / w, (s.x1_set.hi - a) / w, (s.x2_set.lo - a) / w,
          (s.x2_set.hi - a) / w, s.step};
}

/// Expected remaining message entropy below s, given that the inputs are
/// uniform on the state's rectangle.
inline double subtree_rate(const ProtocolTree& tree, const ProtocolState& s,
                           std::map<StateKey, double>* memo) {
  StateKey key;
  if (memo) {
    key = normalized_key(s);
    if (auto it = memo->find(key); it != memo->end()) return it->second;
  }
  double rate = 0.0;
  Move m = tree.next(s);
  if (const auto* msg = std::get_if<Message>(&m)) {
    const Interval& iv = msg->speaker == Party::node1 ? s.x1_set : s.x2_set;
    std::vector<double> cond(msg->alphabet_size());
    for (std::size_t k = 0; k < cond.size(); ++k) cond[k] = piece(iv, msg->cuts, k).length() / iv.length();
    rate = shannon_entropy(cond);
    for (std::size_t k = 0; k < cond.size(); ++k) {
      if (cond[k] > 0.0) rate += cond[k] * subtree_rate(tree, child_state(s, *msg, k), memo);
    }
  }
  if (memo) memo->emplace(key, rate);
  return rate;
}

}  // namespace detail

/// Sum rate under uniform inputs, accumulated message by message as
/// sum_i H(U_i | U^{i-1}). Scale-invariant protocols share subtrees.
inline double sum_rate(const ProtocolTree& tree) {
  if (tree.scale_invariant()) {
    std::map<detail::StateKey, double> memo;
    return detail::subtree_rate(tree, tree.root(), &memo);
  }
  return detail::subtree_rate(tree, tree.root(), nullptr);
}

struct RateEntropyCheck {
  double sum_rate = 0.0;
  double partition_entropy = 0.0;
  bool ok = false;
};

/// Compares the message-by-message sum rate with the entropy of the leaf
/// partition.
inline RateEntropyCheck verify_rate_equals_partition_entropy(const ProtocolTree& tree, double tol = 1e-12) {
  RateEntropyCheck c;
  c.sum_rate = sum_rate(tree);
  c.partition_entropy = partition_entropy(induced_partition(tree));
  c.ok = std::abs(c.sum_rate - c.partition_entropy) <= tol;
  return c;
}

/// Rounds per party beyond which interval endpoints stop being exact doubles.
inline constexpr std::size_t kMaxBitExchangeDepth = 52;

/// Each round node1 sends the next binary digit of x1 and node2 the next
/// digit of x2; both stop as soon as a digit pair differs. Dyadic inputs use
/// their terminating expansion.
inline ProtocolTree bit_exchange_protocol(std::size_t max_depth) {
  if (max_depth == 0 || max_depth > kMaxBitExchangeDepth) {
    throw std::invalid_argument("bit_exchange_protocol: max_depth must be in [1, 52]");
  }
  auto rule = [](const ProtocolState& s) -> Move {
    if (s.x1_set.lo >= s.x2_set.hi) return Decision{Outcome::one};
    if (s.x1_set.hi <= s.x2_set.lo) return Decision{Outcome::zero};
    const bool node1 = s.step % 2 == 0;
    const Interval& iv = node1 ? s.x1_set : s.x2_set;
    return Message{node1 ? Party::node1 : Party::node2, {0.5 * (iv.lo + iv.hi)}};
  };
  return ProtocolTree("bit-exchange", {0.0, 1.0, 0.0, 1.0}, max_depth, rule, true);
}

/// Node1 says whether x1 > 1/2; if so node2 says whether x2 > 1/2. Computes
/// the quadrant indicator in one round.
inline ProtocolTree quadrant_one_round_protocol() {
  auto rule = [](const ProtocolState& s) -> Move {
    if (s.x1_set.hi <= 0.5) return Decision{Outcome::zero};
    if (s.x1_set.lo >= 0.5 && s.x2_set.hi <= 0.5) return Decision{Outcome::zero};
    if (s.x1_set.lo >= 0.5 && s.x2_set.lo >= 0.5) return Decision{Outcome::one};
    if (s.step == 0) return Message{Party::node1, {0.5}};
    return Message{Party::node2, {0.5}};
  };
  return ProtocolTree("quadrant", {0.0, 1.0, 0.0, 1.0}, 1, rule);
}

/// Refines the Babai cell of the origin into the Voronoi partition. Round 1:
/// node1 names its column, node2 its row when the column is an outer one.
/// Inside a crossed cell both bisect their intervals in turn until the
/// remaining rectangle lies on one side of the crossing line. Outcome one
/// means the Babai point (the origin) is the nearest lattice point.
inline ProtocolTree babai_to_voronoi_protocol(const BabaiSubdivision& sub, std::size_t max_rounds) {
  if (max_rounds == 0 || max_rounds > kMaxBitExchangeDepth) {
    throw std::invalid_argument("babai_to_voronoi_protocol: max_rounds must be in [1, 52]");
  }
  auto rule = [sub](const ProtocolState& s) -> Move {
    if (sub.degenerate()) return Decision{Outcome::one};
    const auto& cells = sub.cells;
    const double left_cut = cells[0].rect.x_hi;
    const double right_cut = cells[3].rect.x_hi;
    if (s.step == 0) return Message{Party::node1, {left_cut, right_cut}};
    const bool middle = s.x1_set.lo >= left_cut && s.x1_set.hi <= right_cut;
    if (middle) return Decision{Outcome::one};
    const std::size_t base = s.x1_set.hi <= left_cut ? 0 : 4;
    if (s.step == 1) return Message{Party::node2, {cells[base].rect.y_hi, cells[base + 2].rect.y_lo}};
    const SubCell* cell = nullptr;
    for (std::size_t k = base; k < base + 3; ++k) {
      if (s.x2_set.lo >= cells[k].rect.y_lo && s.x2_set.hi <= cells[k].rect.y_hi) cell = &cells[k];
    }
    if (cell == nullptr) throw std::logic_error("babai_to_voronoi_protocol: state outside all cells");
    if (cell->error_free) return Decision{Outcome::one};

    const Segment& seg = *cell->crossing;
    const double origin_side = seg.side({0.0, 0.0});
    const double tol = 1e-12 * seg.length() * std::max(cell->rect.width(), cell->rect.height());
    bool any_origin = false;
    bool any_other = false;
    for (Point2 p : {Point2{s.x1_set.lo, s.x2_set.lo}, Point2{s.x1_set.hi, s.x2_set.lo},
                     Point2{s.x1_set.lo, s.x2_set.hi}, Point2{s.x1_set.hi, s.x2_set.hi}}) {
      const double side = seg.side(p);
      if (std::abs(side) <= tol) continue;
      ((side > 0.0) == (origin_side > 0.0) ? any_origin : any_other) = true;
    }
    if (!any_other) return Decision{Outcome::one};
    if (!any_origin) return Decision{Outcome::zero};
    const bool node1 = s.step % 2 == 0;
    const Interval& iv = node1 ? s.x1_set : s.x2_set;
    return Message{node1 ? Party::node1 : Party::node2, {0.5 * (iv.lo + iv.hi)}};
  };
  return ProtocolTree("babai-to-voronoi", sub.babai_cell, max_rounds + 1, rule);
}

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::zero:
      return "0";
    case Outcome::one:
      return "1";
    case Outcome::undecided:
      return "undecided";
  }
  return "undecided";
}

/// Comma-separated symbols, one transcript per line.
inline std::string format_transcript(const Transcript& t) {
  std::string out;
  for (std::size_t i = 0; i < t.symbols.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t.symbols[i]);
  }
  return out;
}

}  // namespace latcomm
