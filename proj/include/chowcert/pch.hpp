#pragma once

// The quotient Ker(istar_istar) / Im(gamma) with the three distinguished
// generator cycles as basis. Dimensions come from ranks and coordinates
// from an incremental span echelon over the gamma columns, so the kernel
// itself is never materialized; membership is tested by one matrix-vector
// product. This keeps large fibres inside the certificate time budget.

#include <array>
#include <nlohmann/json.hpp>

#include "chowcert/chowcx.hpp"
#include "chowcert/fibre.hpp"
#include "chowcert/linalg.hpp"

namespace chowcert {

struct GeneratorCycles {
  CycleVector e1;  // section row of H rulings at a fixed base column
  CycleVector e2;  // section row of V rulings at a fixed base row
  CycleVector f;   // ruling difference 2A - 2B over every exceptional component
};

// The three generator cycles, built at generic points of the base row i0
// and base column j0 so no exceptional corrections appear.
inline GeneratorCycles generator_cycles(const ProductFibre& fibre, int i0 = 0, int j0 = 0) {
  GeneratorCycles g;
  for (int i = 0; i < fibre.k1(); ++i)
    add_class(g.e1, fibre, fibre.strict_id(i, j0), static_cast<int>(StrictClass::H), Rat(1));
  for (int j = 0; j < fibre.k2(); ++j)
    add_class(g.e2, fibre, fibre.strict_id(i0, j), static_cast<int>(StrictClass::V), Rat(1));
  for (int i = 0; i < fibre.k1(); ++i)
    for (int j = 0; j < fibre.k2(); ++j) {
      add_class(g.f, fibre, fibre.exc_id(i, j), static_cast<int>(ExcClass::A), Rat(2));
      add_class(g.f, fibre, fibre.exc_id(i, j), static_cast<int>(ExcClass::B), Rat(-2));
    }
  return g;
}

class PchSpace {
 public:
  explicit PchSpace(const ProductFibre& fibre, int i0 = 0, int j0 = 0)
      : fibre_(fibre),
        istar_(istar_istar_matrix(fibre)),
        gamma_(gamma_matrix(fibre)),
        istar_cols_(istar_.column_view()),
        span_(fibre.coord_dim()),
        gens_(generator_cycles(fibre, i0, j0)) {
    istar_rank_ = rank_checked(istar_);
    std::vector<SparseVecR> gamma_cols = gamma_.column_view();
    for (const auto& col : gamma_cols) {
      if (!in_kernel(col)) throw consistency_error("image column escapes the kernel");
      span_.insert(col);
    }
    image_rank_ = span_.rank();
    int tag = 0;
    for (const CycleVector* gen : {&gens_.e1, &gens_.e2, &gens_.f}) {
      if (!in_kernel(*gen)) throw consistency_error("generator cycle outside the kernel");
      if (!span_.insert(*gen, tag++))
        throw consistency_error("generator cycles dependent modulo the image");
    }
  }

  const ProductFibre& fibre() const { return fibre_; }
  const SparseRatMatrix& istar_istar() const { return istar_; }
  const SparseRatMatrix& gamma() const { return gamma_; }
  const GeneratorCycles& generators() const { return gens_; }

  int ambient_dim() const { return fibre_.coord_dim(); }
  int kernel_dim() const { return ambient_dim() - istar_rank_; }
  int image_rank() const { return image_rank_; }
  int quotient_dim() const { return kernel_dim() - image_rank_; }

  SparseVecR istar_apply(const CycleVector& v) const {
    SparseVecR out;
    for (const auto& [c, coeff] : v) {
      if (c < 0 || c >= istar_.cols()) throw precondition_error("cycle index out of range");
      vec_add_scaled(out, coeff, istar_cols_[c]);
    }
    return out;
  }

  bool in_kernel(const CycleVector& v) const { return istar_apply(v).empty(); }

  // Coordinates in the generator basis; constant on cosets of Im(gamma).
  std::array<Rat, 3> coords(const CycleVector& v) const {
    if (!in_kernel(v)) throw precondition_error("cycle not in the kernel");
    auto expr = span_.express(v);
    if (!expr) throw consistency_error("kernel cycle outside the generated span");
    std::array<Rat, 3> out{Rat(0), Rat(0), Rat(0)};
    for (const auto& [t, c] : *expr) out[t] = c;
    return out;
  }

  nlohmann::ordered_json summary_json() const {
    nlohmann::ordered_json j;
    j["k1"] = fibre_.k1();
    j["k2"] = fibre_.k2();
    j["multiplicity_profile"] = multiplicity_profile_name(fibre_.profile());
    j["ambient_dim"] = ambient_dim();
    j["kernel_dim"] = kernel_dim();
    j["image_rank"] = image_rank();
    j["quotient_dim"] = quotient_dim();
    auto coord_row = [this](const CycleVector& v) {
      auto c = coords(v);
      return nlohmann::ordered_json{rat_to_string(c[0]), rat_to_string(c[1]),
                                    rat_to_string(c[2])};
    };
    j["generator_coords"] = {coord_row(gens_.e1), coord_row(gens_.e2), coord_row(gens_.f)};
    return j;
  }

 private:
  ProductFibre fibre_;
  SparseRatMatrix istar_;
  SparseRatMatrix gamma_;
  std::vector<SparseVecR> istar_cols_;
  SpanEchelon span_;  // gamma columns first, then the tagged generators
  GeneratorCycles gens_;
  int istar_rank_ = 0;
  int image_rank_ = 0;
};

inline PchSpace pch_space(const ProductFibre& fibre, int i0 = 0, int j0 = 0) {
  return PchSpace(fibre, i0, j0);
}

inline std::array<Rat, 3> pch_coords(const PchSpace& space, const CycleVector& v) {
  return space.coords(v);
}

}  // namespace chowcert
