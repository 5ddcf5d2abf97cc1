#pragma once

// Combinatorial model of the special fibre of a blown-up product of two
// polygon degenerations. Strict components are indexed by cells (i, j) of
// the k1 x k2 torus grid; exceptional components sit at the grid corners
// (i + 1/2, j + 1/2). Each strict component carries the divisor lattice
// {H, V, E_sw, E_se, E_nw, E_ne} of a four-corner blow-up of P1 x P1; each
// exceptional component carries the ruling lattice {A, B} of P1 x P1.
//
// Around the corner (i + 1/2, j + 1/2) the four strict components are
// labeled by roles: role 1 is the cell to the south-west of the corner,
// role 2 to the north-west, role 3 to the south-east, role 4 to the
// north-east. Role pairs (1,4) and (2,3) are the diagonal pairs and do not
// meet. The exceptional component meets role 1 and 4 in an A ruling and
// role 2 and 3 in a B ruling.

#include <array>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "chowcert/rational.hpp"
#include "chowcert/sparse_matrix.hpp"

namespace chowcert {

enum class StrictClass : int { H = 0, V = 1, Esw = 2, Ese = 3, Enw = 4, Ene = 5 };
enum class ExcClass : int { A = 0, B = 1 };

inline std::string class_label(bool strict, int cls) {
  static const char* strict_names[6] = {"H", "V", "E_sw", "E_se", "E_nw", "E_ne"};
  static const char* exc_names[2] = {"A", "B"};
  if (strict) {
    if (cls < 0 || cls >= 6) throw precondition_error("divisor class index out of range");
    return strict_names[cls];
  }
  if (cls < 0 || cls >= 2) throw precondition_error("ruling class index out of range");
  return exc_names[cls];
}

enum class DoubleCurveKind { horizontal, vertical, exceptional };

struct DoubleCurve {
  DoubleCurveKind kind;
  // Horizontal: north edge of cell (i, j). Vertical: east edge of cell
  // (i, j). Exceptional: curve at corner (i + 1/2, j + 1/2) toward the
  // strict component playing `role`.
  int i, j;
  int role;  // 1..4 for exceptional-adjacency curves, 0 otherwise
  std::array<int, 2> comps;  // incident components; strict side first for exceptional curves
};

struct TriplePoint {
  int i, j;      // corner
  int quadrant;  // 0: roles {1,2}, 1: roles {1,3}, 2: roles {2,4}, 3: roles {3,4}
  std::array<int, 3> comps;
  std::array<int, 3> curves;  // indices into double_curves()
};

enum class MultiplicityProfile { blowup_default, all_ones };

inline std::string multiplicity_profile_name(MultiplicityProfile p) {
  return p == MultiplicityProfile::blowup_default ? "default" : "all-ones";
}

class ProductFibre {
 public:
  ProductFibre(int k1, int k2, MultiplicityProfile profile = MultiplicityProfile::blowup_default)
      : k1_(k1), k2_(k2), profile_(profile) {
    if (k1 < 3 || k2 < 3)
      throw precondition_error("degenerate polygon: component counts must be at least 3");
    build();
  }

  int k1() const { return k1_; }
  int k2() const { return k2_; }
  MultiplicityProfile profile() const { return profile_; }

  int num_strict() const { return k1_ * k2_; }
  int num_components() const { return 2 * k1_ * k2_; }

  int strict_id(int i, int j) const { return wrap1(i) * k2_ + wrap2(j); }
  int exc_id(int i, int j) const { return num_strict() + wrap1(i) * k2_ + wrap2(j); }
  bool is_strict(int c) const {
    check_component(c);
    return c < num_strict();
  }
  // Cell of a strict component, or corner of an exceptional one.
  std::pair<int, int> cell(int c) const {
    check_component(c);
    int base = c < num_strict() ? c : c - num_strict();
    return {base / k2_, base % k2_};
  }

  int basis_size(int c) const { return is_strict(c) ? 6 : 2; }
  int coord_base(int c) const {
    check_component(c);
    return c < num_strict() ? 6 * c : 6 * num_strict() + 2 * (c - num_strict());
  }
  int coord(int c, int cls) const {
    if (cls < 0 || cls >= basis_size(c)) throw precondition_error("divisor class index out of range");
    return coord_base(c) + cls;
  }
  int coord_dim() const { return 8 * k1_ * k2_; }

  Rat multiplicity(int c) const {
    if (profile_ == MultiplicityProfile::all_ones) {
      check_component(c);
      return Rat(1);
    }
    return is_strict(c) ? Rat(1) : Rat(2);
  }

  const std::vector<DoubleCurve>& double_curves() const { return curves_; }
  const std::vector<TriplePoint>& triple_points() const { return triples_; }
  const std::vector<int>& curves_on(int c) const {
    check_component(c);
    return curves_on_[c];
  }

  int hcurve_index(int i, int j) const { return wrap1(i) * k2_ + wrap2(j); }
  int vcurve_index(int i, int j) const { return k1_ * k2_ + wrap1(i) * k2_ + wrap2(j); }
  int ecurve_index(int i, int j, int role) const {
    if (role < 1 || role > 4) throw precondition_error("corner role must be 1..4");
    return 2 * k1_ * k2_ + 4 * (wrap1(i) * k2_ + wrap2(j)) + (role - 1);
  }

  // Strict component playing the given role at corner (i + 1/2, j + 1/2).
  int corner_component(int i, int j, int role) const {
    switch (role) {
      case 1: return strict_id(i, j);
      case 2: return strict_id(i, j + 1);
      case 3: return strict_id(i + 1, j);
      case 4: return strict_id(i + 1, j + 1);
      default: throw precondition_error("corner role must be 1..4");
    }
  }

  // Exceptional curve of the strict component at its corner with this role:
  // the corner sits at the NE of role 1, SE of role 2, NW of role 3, SW of
  // role 4.
  static int corner_strict_class(int role) {
    switch (role) {
      case 1: return static_cast<int>(StrictClass::Ene);
      case 2: return static_cast<int>(StrictClass::Ese);
      case 3: return static_cast<int>(StrictClass::Enw);
      case 4: return static_cast<int>(StrictClass::Esw);
      default: throw precondition_error("corner role must be 1..4");
    }
  }

  static int corner_ruling_class(int role) {
    switch (role) {
      case 1:
      case 4: return static_cast<int>(ExcClass::A);
      case 2:
      case 3: return static_cast<int>(ExcClass::B);
      default: throw precondition_error("corner role must be 1..4");
    }
  }

 private:
  int wrap1(int i) const { return ((i % k1_) + k1_) % k1_; }
  int wrap2(int j) const { return ((j % k2_) + k2_) % k2_; }
  void check_component(int c) const {
    if (c < 0 || c >= num_components()) throw precondition_error("component id out of range");
  }

  void build() {
    curves_.reserve(6 * k1_ * k2_);
    for (int i = 0; i < k1_; ++i)
      for (int j = 0; j < k2_; ++j)
        curves_.push_back({DoubleCurveKind::horizontal, i, j, 0,
                           {strict_id(i, j), strict_id(i, j + 1)}});
    for (int i = 0; i < k1_; ++i)
      for (int j = 0; j < k2_; ++j)
        curves_.push_back({DoubleCurveKind::vertical, i, j, 0,
                           {strict_id(i, j), strict_id(i + 1, j)}});
    for (int i = 0; i < k1_; ++i)
      for (int j = 0; j < k2_; ++j)
        for (int role = 1; role <= 4; ++role)
          curves_.push_back({DoubleCurveKind::exceptional, i, j, role,
                             {corner_component(i, j, role), exc_id(i, j)}});

    triples_.reserve(4 * k1_ * k2_);
    for (int i = 0; i < k1_; ++i)
      for (int j = 0; j < k2_; ++j) {
        int x = exc_id(i, j);
        // Quadrants pair the roles whose strict components share an edge.
        const std::array<std::array<int, 2>, 4> role_pairs = {{{1, 2}, {1, 3}, {2, 4}, {3, 4}}};
        for (int q = 0; q < 4; ++q) {
          auto [ra, rb] = role_pairs[q];
          int ca = corner_component(i, j, ra), cb = corner_component(i, j, rb);
          int shared;
          switch (q) {
            case 0: shared = hcurve_index(i, j); break;
            case 1: shared = vcurve_index(i, j); break;
            case 2: shared = vcurve_index(i, j + 1); break;
            default: shared = hcurve_index(i + 1, j); break;
          }
          triples_.push_back({i, j, q, {ca, cb, x},
                              {shared, ecurve_index(i, j, ra), ecurve_index(i, j, rb)}});
        }
      }

    curves_on_.assign(num_components(), {});
    for (int d = 0; d < static_cast<int>(curves_.size()); ++d)
      for (int c : curves_[d].comps) curves_on_[c].push_back(d);
    for (int c = 0; c < num_components(); ++c) {
      std::size_t expected = (c < num_strict()) ? 8u : 4u;
      if (curves_on_[c].size() != expected)
        throw consistency_error("double curve incidence count mismatch");
    }
    if (curves_.size() != static_cast<std::size_t>(6 * k1_ * k2_) ||
        triples_.size() != static_cast<std::size_t>(4 * k1_ * k2_))
      throw consistency_error("fibre enumeration count mismatch");
  }

  int k1_, k2_;
  MultiplicityProfile profile_;
  std::vector<DoubleCurve> curves_;
  std::vector<TriplePoint> triples_;
  std::vector<std::vector<int>> curves_on_;
};

// Divisor lattice of one component, for intersection computations. Classes
// are sparse vectors over the local basis indices.
struct SurfaceLattice {
  int component;
  bool strict;
};

inline SurfaceLattice lattice_of(const ProductFibre& f, int c) {
  return SurfaceLattice{c, f.is_strict(c)};
}

inline Rat intersection_number(const SurfaceLattice& lat, const SparseVecR& z1,
                               const SparseVecR& z2) {
  int basis = lat.strict ? 6 : 2;
  for (const auto* z : {&z1, &z2})
    for (const auto& [idx, c] : *z)
      if (idx < 0 || idx >= basis) throw precondition_error("class index outside lattice basis");
  Rat total(0);
  auto coeff = [](const SparseVecR& z, int idx) {
    auto it = z.find(idx);
    return it == z.end() ? Rat(0) : it->second;
  };
  if (lat.strict) {
    total += coeff(z1, 0) * coeff(z2, 1) + coeff(z1, 1) * coeff(z2, 0);
    for (int e = 2; e < 6; ++e) total -= coeff(z1, e) * coeff(z2, e);
  } else {
    total += coeff(z1, 0) * coeff(z2, 1) + coeff(z1, 1) * coeff(z2, 0);
  }
  return total;
}

// Class of a double curve inside the lattice of one of its two incident
// components.
inline SparseVecR double_curve_class(const ProductFibre& f, const DoubleCurve& d, int side) {
  if (side != d.comps[0] && side != d.comps[1])
    throw precondition_error("component not incident to the double curve");
  SparseVecR cls;
  auto set = [&cls](StrictClass c, long v) { cls[static_cast<int>(c)] = Rat(v); };
  switch (d.kind) {
    case DoubleCurveKind::horizontal:
      // North edge of (i, j): the H ruling through the two north corners.
      set(StrictClass::H, 1);
      if (side == d.comps[0]) {
        set(StrictClass::Enw, -1);
        set(StrictClass::Ene, -1);
      } else {
        set(StrictClass::Esw, -1);
        set(StrictClass::Ese, -1);
      }
      break;
    case DoubleCurveKind::vertical:
      // East edge of (i, j): the V ruling through the two east corners.
      set(StrictClass::V, 1);
      if (side == d.comps[0]) {
        set(StrictClass::Ese, -1);
        set(StrictClass::Ene, -1);
      } else {
        set(StrictClass::Esw, -1);
        set(StrictClass::Enw, -1);
      }
      break;
    case DoubleCurveKind::exceptional:
      if (side == d.comps[0])
        cls[ProductFibre::corner_strict_class(d.role)] = Rat(1);
      else
        cls[ProductFibre::corner_ruling_class(d.role)] = Rat(1);
      break;
  }
  return cls;
}

// Shifts a local class into the global coordinate layout of the fibre.
inline SparseVecR embed_class(const ProductFibre& f, int comp, const SparseVecR& local) {
  SparseVecR out;
  for (const auto& [idx, c] : local) out[f.coord(comp, idx)] = c;
  return out;
}

// A one-cycle on the fibre: rational coefficients over the global divisor
// coordinates of all components.
using CycleVector = SparseVecR;

inline void add_class(CycleVector& cycle, const ProductFibre& f, int comp, int cls,
                      const Rat& coeff) {
  Rat& slot = cycle[f.coord(comp, cls)];
  slot += coeff;
  if (slot == 0) cycle.erase(f.coord(comp, cls));
}

inline nlohmann::ordered_json cycle_to_json(const ProductFibre& f, const CycleVector& v) {
  auto entries = nlohmann::ordered_json::array();
  for (const auto& [idx, c] : v) {
    // Recover (component, class) from the flat coordinate.
    int comp, cls;
    if (idx < 6 * f.num_strict()) {
      comp = idx / 6;
      cls = idx % 6;
    } else {
      int off = idx - 6 * f.num_strict();
      comp = f.num_strict() + off / 2;
      cls = off % 2;
    }
    entries.push_back({comp, class_label(f.is_strict(comp), cls), rat_to_string(c)});
  }
  return entries;
}

inline nlohmann::ordered_json fibre_summary_json(const ProductFibre& f) {
  nlohmann::ordered_json j;
  j["k1"] = f.k1();
  j["k2"] = f.k2();
  j["components"] = f.num_components();
  j["strict_components"] = f.num_strict();
  j["exceptional_components"] = f.num_components() - f.num_strict();
  j["double_curves"] = f.double_curves().size();
  j["triple_points"] = f.triple_points().size();
  j["cycle_coordinates"] = f.coord_dim();
  j["multiplicity_profile"] = multiplicity_profile_name(f.profile());
  // Adjacency sample: the components and curves around the first corner.
  nlohmann::ordered_json corner;
  corner["corner"] = {0, 0};
  corner["exceptional_component"] = f.exc_id(0, 0);
  auto roles = nlohmann::ordered_json::array();
  for (int role = 1; role <= 4; ++role)
    roles.push_back({{"role", role},
                     {"component", f.corner_component(0, 0, role)},
                     {"strict_class", class_label(true, ProductFibre::corner_strict_class(role))},
                     {"ruling", class_label(false, ProductFibre::corner_ruling_class(role))}});
  corner["roles"] = roles;
  j["adjacency_sample"] = corner;
  return j;
}

}  // namespace chowcert
