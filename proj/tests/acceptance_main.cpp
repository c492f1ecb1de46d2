// Acceptance suite: end-to-end checks of the worked examples, one pass/fail
// line per criterion.  Exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "renormlab/renormlab.hpp"

using namespace renormlab;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

struct Check {
  bool ok = true;
  std::ostringstream why;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) why << "; ";
      why << what;
      ok = false;
    }
  }
};

template <class B>
TowerAnalysis<B> tower_of(B backend, ChainKind kind, int depth) {
  ChainSpec<B> spec{std::move(backend), kind, depth};
  return analyze_tower(spec, depth);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --------------------------------------------------------------------------

void criterion_1() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  auto t = tower_of(HeisenbergBackend(2, 3), ChainKind::kRenormalization, 3);
  const Point n[] = {36, 1296, 46656};
  const char* q[] = {"216", "46656", "10077696"};
  const std::uint64_t d[] = {6, 36, 216};
  for (int l = 1; l <= 3; ++l) {
    c.expect(t.level(l).size == n[l - 1], "n_" + std::to_string(l));
    c.expect(to_string(t.quotients[l].order()) == q[l - 1], "|Q_" + std::to_string(l) + "|");
    c.expect(t.discriminants[l].order() == d[l - 1], "|D_" + std::to_string(l) + "|");
    c.expect(t.shape_known[l] && t.shapes[l] == AbelianShape{true, {d[l - 1]}},
             "D_" + std::to_string(l) + " cyclic");
  }
  double elapsed = seconds_since(t0);
  c.expect(elapsed <= 60.0, "runtime " + std::to_string(elapsed) + "s > 60s");
  report(1, "heisenberg(2,3) levels 1..3: sizes, quotient and discriminant orders, cyclic",
         c.ok, c.why.str());
}

void criterion_2() {
  Check c;
  auto t = tower_of(HeisenbergBackend(2, 2), ChainKind::kRenormalization, 4);
  // Composed bonding D_{2l} -> D_l has trivial image for l = 1, 2.
  for (int l : {1, 2}) {
    std::vector<Permutation> images;
    for (const Permutation& g : t.discriminants[2 * l].strong_generators())
      images.push_back(t.project_perm(g, 2 * l, l));
    PermGroupBSGS image = bsgs_build(images, t.level(l).size);
    c.expect(image.trivial(), "image of D_" + std::to_string(2 * l) + " in D_" +
                                  std::to_string(l) + " not trivial");
  }
  Verdict v = classify_discriminant(t, 2);
  c.expect(v.kind == VerdictKind::kTrivialInLimit, "verdict " + to_string(v.kind));
  report(2, "heisenberg(2,2) depth 4: composed bondings vanish, verdict trivial_in_limit",
         c.ok, c.why.str());
}

void criterion_3() {
  Check c;
  auto t = tower_of(LatticeBackend(3, 2, {{1, 2, 0}}), ChainKind::kRenormalization, 4);
  for (int l = 1; l <= 4; ++l)
    c.expect(t.discriminants[l].order() == 3, "|D_" + std::to_string(l) + "|");
  for (int l = 1; l < 4; ++l) {
    std::vector<Permutation> images;
    for (const Permutation& g : t.discriminants[l + 1].strong_generators())
      images.push_back(t.project_perm(g, l + 1, l));
    PermGroupBSGS image = bsgs_build(images, t.level(l).size);
    bool bijective =
        image.order() == t.discriminants[l].order() &&
        image.order() == t.discriminants[l + 1].order();
    c.expect(bijective, "bonding at level " + std::to_string(l) + " not bijective");
  }
  Verdict v = classify_discriminant(t, 2);
  c.expect(v.kind == VerdictKind::kFiniteStable && v.stable_order == 3,
           "verdict " + to_string(v.kind));

  KernelProbe kp = kernel_probe(t, 3, 2);
  c.expect(kp.words.size() == 2, "kernel probe found " + std::to_string(kp.words.size()) +
                                     " words, wanted 2");
  std::set<std::string> words;
  for (const KernelWord& w : kp.words) words.insert(w.word);
  c.expect(words == std::set<std::string>{"h1", "h1^-1"},
           "kernel words are not the rotation powers");
  report(3, "lattice semidirect depth 4: constant discriminant 3, bijective bondings, "
            "finite_stable(3), kernel = rotation powers",
         c.ok, c.why.str());
}

void criterion_4() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  auto t = tower_of(AffineUnitBackend(), ChainKind::kRenormalization, 8);
  for (int l = 1; l <= 8; ++l)
    c.expect(t.discriminants[l].order() == (BigInt{1} << (l - 1)),
             "|D_" + std::to_string(l) + "|");
  // Independent oracle at small depth: count stabilizer elements by closure.
  for (int l = 1; l <= 4; ++l)
    c.expect(oracles::closure_stabilizer_order(t.level(l).generator_perms, t.level(l).size,
                                               0) == (std::uint64_t{1} << (l - 1)),
             "oracle disagrees at level " + std::to_string(l));
  for (int l = 1; l < 8; ++l) {
    std::vector<Permutation> images;
    for (const Permutation& g : t.discriminants[l + 1].strong_generators())
      images.push_back(t.project_perm(g, l + 1, l));
    c.expect(bsgs_build(images, t.level(l).size).order() == t.discriminants[l].order(),
             "bonding at level " + std::to_string(l) + " not onto");
  }
  Verdict v = classify_discriminant(t, 3);
  c.expect(v.kind == VerdictKind::kGrowing, "verdict " + to_string(v.kind));
  double elapsed = seconds_since(t0);
  c.expect(elapsed <= 10.0, "runtime " + std::to_string(elapsed) + "s > 10s");
  report(4, "affine unit depth 8: discriminants 2^(l-1), bondings onto, verdict growing",
         c.ok, c.why.str());
}

void criterion_5() {
  Check c;
  auto th = tower_of(HeisenbergBackend(2, 3), ChainKind::kRenormalization, 3);
  QASearchResult rh = qa_witness_search(th, 3, 1, 8);
  c.expect(!rh.found, "unexpected heisenberg witness '" +
                          (rh.found ? rh.witness.word : "") + "'");

  auto tg = tower_of(grigorchuk(), ChainKind::kVertexStabilizer, 6);
  QASearchResult rg = qa_witness_search(tg, 6, 1, 12);
  c.expect(rg.found, "no grigorchuk witness found");
  if (rg.found)
    c.expect(validate_qa_witness(tg, rg.witness), "grigorchuk witness failed validation");
  report(5, "quasi-analyticity: heisenberg none found at (3,1,8); grigorchuk witness at "
            "(6,1,12) validates",
         c.ok, c.why.str());
}

template <class B>
void property_phi_and_tokens(Check& c, const B& backend, const std::string& name,
                             std::uint64_t seed) {
  auto words = oracles::random_words(backend, 20000, 8, seed);
  for (std::size_t i = 0; i + 1 < words.size(); i += 2) {
    auto lhs = backend.apply_phi(backend.multiply(words[i], words[i + 1]));
    auto rhs = backend.multiply(backend.apply_phi(words[i]), backend.apply_phi(words[i + 1]));
    if (!(lhs == rhs)) {
      c.expect(false, name + ": endomorphism not a homomorphism");
      return;
    }
  }
  auto gammas = oracles::random_words(backend, 10000, 6, seed + 1);
  auto gs = oracles::random_words(backend, 10000, 6, seed + 2);
  for (int level : {1, 2}) {
    for (std::size_t i = 0; i < gs.size(); ++i) {
      auto gamma = gammas[i];
      for (int l = 0; l < level; ++l) gamma = backend.apply_phi(gamma);
      if (backend.coset_token(backend.multiply(gs[i], gamma), level) !=
          backend.coset_token(gs[i], level)) {
        c.expect(false, name + ": token not right-invariant at level " + std::to_string(level));
        return;
      }
    }
  }
}

template <class B>
void property_tower(Check& c, const TowerAnalysis<B>& t, const std::string& name) {
  for (int l = 0; l <= t.top_level(); ++l) {
    c.expect(t.discriminants[l].order() * t.level(l).size == t.quotients[l].order(),
             name + ": orbit-stabilizer fails at level " + std::to_string(l));
    if (l == 0) continue;
    const auto& upper = t.level(l);
    const auto& lower = t.level(l - 1);
    if (upper.size > 100000) continue;
    for (std::size_t g = 0; g < upper.generator_perms.size(); ++g)
      for (Point x = 0; x < upper.size; ++x)
        if (upper.projection[upper.generator_perms[g](x)] !=
            lower.generator_perms[g](upper.projection[x])) {
          c.expect(false, name + ": projection not equivariant at level " + std::to_string(l));
          return;
        }
  }
  if (t.spec.kind == ChainKind::kRenormalization) {
    for (int l = 0; l < t.top_level(); ++l) {
      TokenIndex<B> up(t.spec.backend, t.levels[l + 1]);
      auto s = shift_map(t.spec, t.level(l), up);
      auto fiber = t.basepoint_fiber(l + 1, std::min(l + 1, 1));
      c.expect(std::set<Point>(s.begin(), s.end()) ==
                   std::set<Point>(fiber.begin(), fiber.end()),
               name + ": shift image is not the basepoint fiber at level " + std::to_string(l));
    }
  }
}

void criterion_6() {
  Check c;

  property_phi_and_tokens(c, HeisenbergBackend(2, 3), "heisenberg", 101);
  property_phi_and_tokens(c, LatticeBackend(3, 2, {{1, 2, 0}}), "lattice", 103);
  property_phi_and_tokens(c, AffineUnitBackend(), "affine", 107);
  property_phi_and_tokens(c, binary_odometer(), "odometer", 109);

  property_tower(c, tower_of(HeisenbergBackend(2, 3), ChainKind::kRenormalization, 3),
                 "heisenberg(2,3)");
  property_tower(c, tower_of(HeisenbergBackend(2, 2), ChainKind::kRenormalization, 3),
                 "heisenberg(2,2)");
  property_tower(c, tower_of(LatticeBackend(3, 2, {{1, 2, 0}}), ChainKind::kRenormalization, 4),
                 "lattice");
  property_tower(c, tower_of(AffineUnitBackend(), ChainKind::kRenormalization, 8), "affine");
  property_tower(c, tower_of(binary_odometer(), ChainKind::kRenormalization, 6), "odometer");
  property_tower(c, tower_of(grigorchuk(), ChainKind::kVertexStabilizer, 5), "grigorchuk");

  // BSGS order against exhaustive closure on small classical groups.
  using oracles::cycle;
  struct Case {
    std::vector<Permutation> gens;
    Point degree;
  };
  std::vector<Case> corpus;
  corpus.push_back({{cycle(3, {0, 1}), cycle(3, {0, 1, 2})}, 3});
  corpus.push_back({{cycle(4, {0, 1}), cycle(4, {0, 1, 2, 3})}, 4});
  corpus.push_back({{cycle(5, {0, 1, 2}), cycle(5, {2, 3, 4})}, 5});
  corpus.push_back({{cycle(6, {0, 1, 2, 3, 4, 5}), cycle(6, {1, 5})}, 6});
  corpus.push_back({{cycle(7, {0, 1}), cycle(7, {0, 1, 2, 3, 4, 5, 6})}, 7});  // order 5040
  corpus.push_back({{cycle(6, {0, 1, 2}), cycle(6, {3, 4, 5}), cycle(6, {0, 3})}, 6});
  corpus.push_back({{cycle(8, {0, 1, 2, 3}), cycle(8, {4, 5, 6, 7}), cycle(8, {0, 4})}, 8});
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    PermGroupBSGS g = bsgs_build(corpus[i].gens, corpus[i].degree);
    c.expect(g.order() == oracles::closure_order(corpus[i].gens, corpus[i].degree),
             "bsgs order disagrees with closure on corpus group " + std::to_string(i));
  }

  report(6, "property suite: orbit-stabilizer, equivariance, endomorphism and token "
            "invariance on 10^4 pairs, bsgs against closure, shift images",
         c.ok, c.why.str());
}

void criterion_7() {
  Check c;
  SelfReplication od = self_replicating_probe(binary_odometer(), 6, 6);
  c.expect(od.pass, "odometer probe failed");
  SelfReplication gr = self_replicating_probe(grigorchuk(), 10, 8);
  c.expect(gr.pass, "grigorchuk probe failed");
  SelfReplication toy = self_replicating_probe(toy_swap(), 8, 6);
  c.expect(!toy.pass, "toy automaton unexpectedly passed");
  report(7, "self-replication: odometer and grigorchuk pass, identity-sections toy fails",
         c.ok, c.why.str());
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  struct Item {
    int number;
    void (*fn)();
    const char* name;
  };
  const Item items[] = {
      {1, criterion_1, "heisenberg tower"},   {2, criterion_2, "p=q collapse"},
      {3, criterion_3, "lattice semidirect"}, {4, criterion_4, "affine unit"},
      {5, criterion_5, "qa witnesses"},       {6, criterion_6, "property suite"},
      {7, criterion_7, "self-replication"},
  };
  for (const Item& item : items) {
    try {
      item.fn();
    } catch (const std::exception& e) {
      report(item.number, item.name, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%s: %d/7 criteria passed (%.1fs)\n", g_failures == 0 ? "OK" : "FAILURES",
              7 - g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
