#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "renormlab/errors.hpp"
#include "renormlab/perm.hpp"

namespace renormlab {

// Groups acting on the d-ary rooted tree by finite-state wreath recursion.
// Each automaton state s carries a root permutation and one section per
// child subtree; an element is a freely reduced word in the states and
// their formal inverses.  Vertices are digit strings; g acts on x.w by
// sending it to root_g(x).(g|x)(w).  Word equality is decidable only to a
// fixed depth, so the backend compares actions up to `comparison_depth`
// and callers treat equality answers as depth-stamped.
class WreathBackend {
 public:
  static constexpr std::uint16_t kIdentityState = 0xffff;

  struct State {
    std::string name;
    std::vector<std::uint16_t> sections;  // per child; kIdentityState = trivial
    std::vector<Point> root;              // permutation of the d children
  };

  struct Letter {
    std::uint16_t state;
    bool inv;
    friend bool operator==(const Letter&, const Letter&) = default;
  };

  using Element = std::vector<Letter>;  // freely reduced; empty = identity

  static constexpr bool kActsOnTree = true;

  WreathBackend(std::string preset_name, int arity, std::vector<State> states,
                std::vector<Element> phi_images = {}, int comparison_depth = 12,
                std::string basepoint_path = {})
      : preset_(std::move(preset_name)),
        arity_(arity),
        states_(std::move(states)),
        phi_images_(std::move(phi_images)),
        comparison_depth_(comparison_depth),
        basepoint_path_(std::move(basepoint_path)) {
    if (arity_ < 2) throw ConfigInvalid("wreath: arity must be at least 2");
    if (comparison_depth_ < 1) throw ConfigInvalid("wreath: comparison depth must be positive");
    for (const State& s : states_) {
      if (s.sections.size() != static_cast<std::size_t>(arity_) ||
          s.root.size() != static_cast<std::size_t>(arity_))
        throw ConfigInvalid("wreath: state '" + s.name + "' has wrong arity");
      Permutation check{s.root};  // validates
      for (std::uint16_t sec : s.sections)
        if (sec != kIdentityState && sec >= states_.size())
          throw ConfigInvalid("wreath: section index out of range");
    }
    if (!phi_images_.empty() && phi_images_.size() != states_.size())
      throw ConfigInvalid("wreath: phi must map every generator");
  }

  int arity() const { return arity_; }
  const std::string& name() const { return preset_; }
  int comparison_depth() const { return comparison_depth_; }
  bool has_phi() const { return !phi_images_.empty(); }

  Element identity() const { return {}; }

  Element multiply(const Element& g, const Element& h) const {
    Element r = g;
    for (const Letter& l : h) push_reduced(r, l);
    return r;
  }

  Element invert(const Element& g) const {
    Element r;
    for (auto it = g.rbegin(); it != g.rend(); ++it) r.push_back({it->state, !it->inv});
    return r;
  }

  Element apply_phi(const Element& g) const {
    if (phi_images_.empty()) throw UnsupportedForChainKind("wreath: no renormalization given");
    Element r;
    for (const Letter& l : g) {
      const Element& img = phi_images_[l.state];
      if (!l.inv)
        for (const Letter& m : img) push_reduced(r, m);
      else
        for (auto it = img.rbegin(); it != img.rend(); ++it)
          push_reduced(r, {it->state, !it->inv});
    }
    return r;
  }

  std::vector<Element> generators() const {
    std::vector<Element> gens;
    for (std::uint16_t i = 0; i < states_.size(); ++i)
      gens.push_back({Letter{i, false}});
    return gens;
  }

  std::vector<std::string> generator_names() const {
    std::vector<std::string> names;
    for (const State& s : states_) names.push_back(s.name);
    return names;
  }

  // The image of the basepoint path prefix; complete coset invariant for the
  // stabilizer of that vertex.
  std::string coset_token(const Element& g, int level) const {
    return act(g, basepoint(level));
  }

  std::string basepoint(int level) const {
    std::string v(static_cast<std::size_t>(level), '0');
    for (std::size_t i = 0; i < v.size() && i < basepoint_path_.size(); ++i)
      v[i] = basepoint_path_[i];
    return v;
  }

  std::string act(const Element& g, std::string v) const {
    for (auto it = g.rbegin(); it != g.rend(); ++it) v = act_letter(*it, std::move(v));
    return v;
  }

  // Section of g at a vertex it fixes: the element describing the action on
  // the subtree below v.
  Element section_at(const Element& g, const std::string& v) const {
    if (act(g, v) != v)
      throw VertexNotFixed("section_at: element moves vertex " + (v.empty() ? "<root>" : v));
    Element out;
    std::string cur = v;
    std::vector<Element> parts(g.size());
    for (std::size_t i = g.size(); i-- > 0;) {
      parts[i] = letter_section(g[i], cur);
      cur = act_letter(g[i], std::move(cur));
    }
    for (const Element& part : parts)
      for (const Letter& l : part) push_reduced(out, l);
    return out;
  }

  // Depth-stamped equality: identical action on every vertex above the
  // comparison depth.
  bool elements_equal(const Element& g, const Element& h, int depth) const {
    return agree_below(multiply(invert(h), g), std::string(), depth);
  }
  bool elements_equal(const Element& g, const Element& h) const {
    return elements_equal(g, h, comparison_depth_);
  }
  bool is_identity_element(const Element& g) const {
    return agree_below(g, std::string(), comparison_depth_);
  }

  nlohmann::json encode(const Element& g) const {
    nlohmann::json j = nlohmann::json::array();
    for (const Letter& l : g) j.push_back({l.state, l.inv});
    return j;
  }

  Element decode(const nlohmann::json& j) const {
    Element g;
    for (const auto& item : j) {
      Letter l{item.at(0).get<std::uint16_t>(), item.at(1).get<bool>()};
      if (l.state >= states_.size()) throw CacheVersionMismatch("wreath: bad element encoding");
      g.push_back(l);
    }
    return g;
  }

  nlohmann::json params() const {
    return {{"arity", arity_},
            {"states", states_.size()},
            {"comparison_depth", comparison_depth_},
            {"basepoint_path", basepoint_path_}};
  }

 private:
  static void push_reduced(Element& w, const Letter& l) {
    if (!w.empty() && w.back().state == l.state && w.back().inv != l.inv)
      w.pop_back();
    else
      w.push_back(l);
  }

  std::string act_letter(const Letter& l, std::string v) const {
    if (l.state == kIdentityState) return v;
    if (!l.inv) {
      std::uint16_t s = l.state;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const State& st = states_[s];
        int x = v[i] - '0';
        v[i] = static_cast<char>('0' + st.root[x]);
        std::uint16_t next = st.sections[x];
        if (next == kIdentityState) break;
        s = next;
      }
      return v;
    }
    // Inverse action: undo the root permutation, then recurse into the
    // preimage child's section.
    std::uint16_t s = l.state;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const State& st = states_[s];
      int y = v[i] - '0';
      int x = 0;
      while (st.root[x] != static_cast<Point>(y)) ++x;
      v[i] = static_cast<char>('0' + x);
      std::uint16_t next = st.sections[x];
      if (next == kIdentityState) break;
      s = next;
    }
    return v;
  }

  // Section of a single letter at a vertex (not necessarily fixed by it).
  Element letter_section(const Letter& l, const std::string& v) const {
    if (l.state == kIdentityState || v.empty()) return l.state == kIdentityState ? Element{} : Element{l};
    if (!l.inv) {
      std::uint16_t s = l.state;
      for (char ch : v) {
        s = states_[s].sections[ch - '0'];
        if (s == kIdentityState) return {};
      }
      return {Letter{s, false}};
    }
    Element sec = letter_section({l.state, false}, act_letter(l, v));
    Element r;
    for (auto it = sec.rbegin(); it != sec.rend(); ++it) r.push_back({it->state, !it->inv});
    return r;
  }

  // True when g acts trivially on every vertex below `v` down to `depth`
  // more levels.
  bool agree_below(const Element& g, const std::string& v, int depth) const {
    if (depth == 0) return true;
    for (int x = 0; x < arity_; ++x) {
      std::string child = v + static_cast<char>('0' + x);
      if (act(g, child) != child) return false;
      if (!agree_below(g, child, depth - 1)) return false;
    }
    return true;
  }

  std::string preset_;
  int arity_;
  std::vector<State> states_;
  std::vector<Element> phi_images_;
  int comparison_depth_;
  std::string basepoint_path_;
};

// The binary adding machine: a = (1, a) swap.  Renormalizable via a -> a^2.
inline WreathBackend binary_odometer(int comparison_depth = 12) {
  WreathBackend::State a{"a", {WreathBackend::kIdentityState, 0}, {1, 0}};
  std::vector<WreathBackend::Element> phi{{{{0, false}, {0, false}}}};
  return WreathBackend("odometer", 2, {a}, phi, comparison_depth);
}

// The first Grigorchuk group: a = swap, b = (a, c), c = (a, d), d = (1, b).
inline WreathBackend grigorchuk(int comparison_depth = 12) {
  constexpr std::uint16_t kId = WreathBackend::kIdentityState;
  WreathBackend::State a{"a", {kId, kId}, {1, 0}};
  WreathBackend::State b{"b", {0, 2}, {0, 1}};
  WreathBackend::State c{"c", {0, 3}, {0, 1}};
  WreathBackend::State d{"d", {kId, 1}, {0, 1}};
  return WreathBackend("grigorchuk", 2, {a, b, c, d}, {}, comparison_depth);
}

// A rigid involution with identity sections only; its sections can never
// reproduce the generator, so it is not self-replicating.
inline WreathBackend toy_swap(int comparison_depth = 12) {
  constexpr std::uint16_t kId = WreathBackend::kIdentityState;
  WreathBackend::State t{"t", {kId, kId}, {1, 0}};
  return WreathBackend("toy", 2, {t}, {}, comparison_depth);
}

}  // namespace renormlab
