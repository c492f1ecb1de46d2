#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "renormlab/backends/affine_unit.hpp"
#include "renormlab/backends/heisenberg.hpp"
#include "renormlab/backends/lattice.hpp"
#include "renormlab/backends/wreath.hpp"
#include "renormlab/errors.hpp"
#include "renormlab/perm.hpp"

namespace renormlab {

enum class ChainKind { kRenormalization, kVertexStabilizer };

inline std::string to_string(ChainKind k) {
  return k == ChainKind::kRenormalization ? "renormalization" : "vertex_stabilizer";
}

// A backend together with the subgroup chain to study: either the images of
// the backend's endomorphism, or the stabilizers of a boundary path for tree
// actions.  Levels and the total coset count are budgeted.
template <class B>
struct ChainSpec {
  B backend;
  ChainKind kind = ChainKind::kRenormalization;
  int max_level = 3;
  Point max_index = 2'000'000;

  void validate() const {
    if (kind == ChainKind::kRenormalization && !backend.has_phi())
      throw ConfigInvalid("chain kind 'renormalization' needs a backend endomorphism");
    if (kind == ChainKind::kVertexStabilizer && !B::kActsOnTree)
      throw ConfigInvalid("chain kind 'vertex_stabilizer' needs a tree action backend");
    if (max_level < 0) throw ConfigInvalid("max_level must be nonnegative");
    if (max_index < 1) throw ConfigInvalid("max_index must be positive");
  }

  typename B::Element phi(const typename B::Element& g) const {
    if (kind != ChainKind::kRenormalization)
      throw UnsupportedForChainKind("endomorphism is not available on a " +
                                    renormlab::to_string(kind) + " chain");
    return backend.apply_phi(g);
  }

  std::string token(const typename B::Element& g, int level) const {
    if (level < 0 || level > max_level)
      throw LevelBudgetExceeded("level " + std::to_string(level) +
                                " outside the budget (max_level=" + std::to_string(max_level) +
                                ")");
    return backend.coset_token(g, level);
  }
};

using BackendVariant =
    std::variant<HeisenbergBackend, LatticeBackend, AffineUnitBackend, WreathBackend>;

}  // namespace renormlab
