#pragma once

// Fourier analysis on G with the convention
//     f^(xi) = |G|^-1 sum_x f(x) e(-<xi, x>),
// unnormalised convolution (f*g)(x) = sum_y f(y) g(x - y), so that
//     (f*g)^ = |G| f^ g^,   sum_x |f|^2 = |G| sum_xi |f^|^2,   E(A) = |G|^3 sum_xi |1_A^|^4.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "addcomb/groups.hpp"

namespace addcomb {

using Complex = std::complex<double>;

struct DensityFunction {
  GroupSpec group;
  std::vector<Complex> values;

  static DensityFunction indicator(const GroupSet& a);
  static DensityFunction zero(const GroupSpec& g);
};

struct FourierTable {
  GroupSpec group;
  std::vector<Complex> coeffs;

  const Complex& operator[](DualElement xi) const { return coeffs[xi]; }
  double magnitude(DualElement xi) const { return std::abs(coeffs[xi]); }
};

/// Factor-wise mixed-radix transform.
FourierTable dft(const DensityFunction& f);
/// O(|G|^2) summation used to audit dft.
FourierTable dft_direct(const DensityFunction& f);
/// f(x) = sum_xi f^(xi) e(<xi, x>).
DensityFunction idft(const FourierTable& t);

FourierTable transform(const GroupSet& a);

DensityFunction convolve(const DensityFunction& f, const DensityFunction& g);
DensityFunction convolve_direct(const DensityFunction& f, const DensityFunction& g);

/// |sum |f|^2 - |G| sum |f^|^2| / max(1, sum |f|^2).
double parseval_audit(const DensityFunction& f);
double parseval_audit(const DensityFunction& f, const FourierTable& t);

/// sum_xi |f^(xi)|^4.
double fourth_moment(const FourierTable& t);

// Exact combinatorics in the ambient group.
std::vector<std::int64_t> representation_counts(const GroupSet& a);
std::int64_t combinatorial_energy(const GroupSet& a);
GroupSet sumset(const GroupSet& a, const GroupSet& b);
GroupSet difference_set(const GroupSet& a, const GroupSet& b);
/// kA - lA.
GroupSet iterated_sumset(const GroupSet& a, int k, int l);
Rational doubling_constant(const GroupSet& a);

struct EnergyReport {
  std::int64_t combinatorial = 0;
  double spectral = 0;       // |G|^3 sum |f^|^4
  double printed_form = 0;   // |G| sum |f^|^4, the dimensionally inconsistent form
  Rational doubling{1};
  Rational lower_bound{0};   // |A|^4 / |A+A|
  std::int64_t upper_bound = 0;  // |A|^3
  double identity_residual = 0;  // |combinatorial - spectral| / combinatorial
  bool lower_ok = false;
  bool upper_ok = false;
  bool printed_form_matches = false;
};

EnergyReport additive_energy(const GroupSet& a);
EnergyReport additive_energy(const GroupSet& a, const FourierTable& t);

}  // namespace addcomb
