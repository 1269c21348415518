#pragma once

// Finite abelian groups G = Z/n_1 x ... x Z/n_k.
//
// Elements and dual elements are addressed by a mixed-radix index
// (row-major: the last factor varies fastest), so a subset of G is simply a
// sorted list of indices and Z/N elements are their own residues. The dual
// of G is identified with G through the pairing
//     <xi, x> = sum_i xi_i * x_i / n_i  (mod 1),
// which makes characters enumerable and annihilators computable by
// congruence checks.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "addcomb/rational.hpp"

namespace addcomb {

using Index = std::size_t;
/// Index of an element of G.
using Element = Index;
/// Index of a character label (an element of the dual, labelled like G).
using DualElement = Index;

/// Raised when coordinates, indices or group shapes do not match.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GroupSpec {
 public:
  /// The trivial group (order 1, no factors).
  GroupSpec() = default;
  explicit GroupSpec(std::vector<std::int64_t> factors);

  static GroupSpec cyclic(std::int64_t n) { return GroupSpec({n}); }
  /// "97" or "3,3,3"; "1" denotes the trivial group.
  static GroupSpec parse(std::string_view literal);

  const std::vector<std::int64_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  std::size_t order() const { return order_; }
  /// lcm of the factors; pairings are integers modulo this value.
  std::int64_t exponent() const { return exponent_; }
  bool is_cyclic() const { return factors_.size() <= 1; }

  Index encode(std::span<const std::int64_t> coords) const;
  std::vector<std::int64_t> decode(Index x) const;

  Index add(Index x, Index y) const;
  Index sub(Index x, Index y) const;
  Index neg(Index x) const;
  Index scale(Index x, std::int64_t k) const;

  /// Numerator of <xi, x> in units of 1/exponent(), reduced to [0, exponent()).
  std::int64_t pairing(DualElement xi, Element x) const;
  /// chi_xi(x) = exp(2 pi i <xi, x>).
  std::complex<double> character(DualElement xi, Element x) const;

  std::string to_string() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.factors_ == b.factors_; }

 private:
  void check_index(Index x) const;

  std::vector<std::int64_t> factors_;
  std::vector<std::int64_t> strides_;
  std::vector<std::int64_t> pairing_weights_;  // exponent / n_i
  std::size_t order_ = 1;
  std::int64_t exponent_ = 1;
};

/// A subset of G stored as sorted, duplicate-free indices.
class GroupSet {
 public:
  GroupSet() = default;
  GroupSet(GroupSpec group, std::vector<Index> members);

  const GroupSpec& group() const { return group_; }
  const std::vector<Index>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Index x) const;
  Rational density() const;
  /// Membership bitmap of length |G|.
  std::vector<char> mask() const;

  friend bool operator==(const GroupSet& a, const GroupSet& b) {
    return a.group_ == b.group_ && a.members_ == b.members_;
  }

 private:
  GroupSpec group_;
  std::vector<Index> members_;
};

struct Subgroup {
  GroupSpec parent;
  std::vector<Element> generators;
  std::vector<Element> elements;  // sorted
  std::size_t index = 1;

  std::size_t size() const { return elements.size(); }
  bool contains(Element x) const;
  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.parent == b.parent && a.elements == b.elements;
  }
};

struct DualSubgroup {
  GroupSpec parent;  // the group whose dual this lives in
  std::vector<DualElement> generators;
  std::vector<DualElement> elements;  // sorted
  std::size_t index = 1;
  std::optional<std::vector<DualElement>> dissociated_basis;

  std::size_t size() const { return elements.size(); }
  std::size_t dim() const { return dissociated_basis ? dissociated_basis->size() : 0; }
  bool contains(DualElement xi) const;
  friend bool operator==(const DualSubgroup& a, const DualSubgroup& b) {
    return a.parent == b.parent && a.elements == b.elements;
  }
};

struct QuotientMap {
  GroupSpec parent;
  Subgroup kernel;
  GroupSpec image;
  std::vector<Index> projection;  // projection[x] = pi(x), total on G
  std::vector<Element> basis_preimages;  // one preimage per image factor generator

  Index operator()(Element x) const { return projection.at(x); }
  /// log |G/H|.
  double codim() const;
  GroupSet apply(const GroupSet& a) const;
  /// The image-dual label zeta with chi_zeta(pi(x)) = chi_xi(x), for xi in kernel-annihilator.
  std::optional<DualElement> descend_character(DualElement xi) const;
};

struct ModelingResult {
  std::int64_t modulus = 2;
  std::int64_t shift = 0;  // a -> (a + shift) mod modulus
  int order = 1;
  std::int64_t baseline_modulus = 2;  // 2 m diam + 1
  std::vector<bool> wrap_certificate;  // [m'-1] : injective on m'A - m'A
  Rational doubling_in_z;  // |A+A| / |A| over the integers

  std::int64_t map(std::int64_t a) const;
  GroupSet image(std::span<const std::int64_t> a) const;
  /// modulus <= C * K^C * |A| for the given exponent C.
  bool within_budget(double exponent, std::size_t set_size) const;
};

Subgroup enumerate_subgroup(const GroupSpec& g, std::span<const Element> gens);
DualSubgroup enumerate_dual_subgroup(const GroupSpec& g, std::span<const DualElement> gens);

/// H = V^perp = {x : <xi, x> = 0 for all xi in V}.
Subgroup annihilator(const DualSubgroup& v);
/// V = H^perp in the dual.
DualSubgroup dual_annihilator(const Subgroup& h);

/// Every subgroup of G (exhaustive; intended for small groups).
std::vector<Subgroup> all_subgroups(const GroupSpec& g);

QuotientMap quotient(const GroupSpec& g, const Subgroup& h);

/// F(y) = sum over the fibre pi^-1(y) of f, divided by |kernel| when averaged.
template <typename T>
std::vector<T> push_forward(std::span<const T> f, const QuotientMap& q, bool averaged) {
  if (f.size() != q.parent.order()) throw ShapeError("push_forward: function length does not match the group");
  std::vector<T> out(q.image.order(), T{});
  for (Index x = 0; x < f.size(); ++x) out[q.projection[x]] += f[x];
  if (averaged) {
    const double k = static_cast<double>(q.kernel.size());
    for (auto& v : out) v /= k;
  }
  return out;
}

/// Order-m Freiman model of an integer set in Z/N with no wrap-around on mA - mA.
ModelingResult model_in_cyclic(std::span<const std::int64_t> a, int m);

/// Greedy generating set for a subgroup given by its elements.
std::vector<Index> minimal_generators(const GroupSpec& g, std::span<const Index> elements);

}  // namespace addcomb
