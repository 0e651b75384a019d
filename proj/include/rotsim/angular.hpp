#pragma once

#include <vector>

// Angular-momentum algebra for linear rotors: closed-form cos^2(theta)
// matrix elements in the |J,M> basis and normalized associated Legendre
// functions for building angular densities. cos^2 couples J to J and J+-2
// only, with M conserved.

namespace rotsim {

/// <J,M| cos^2 |J,M>. Requires |m| <= j.
double cos2_diag(int j, int m);

/// <J+2,M| cos^2 |J,M>. Requires |m| <= j.
double cos2_couple(int j, int m);

/// All cos^2 matrix elements for one M over |m| <= J <= j_max. Both
/// parities are present; a propagation slices out its own ladder.
struct Cos2Band {
  int m = 0;
  int j_min = 0;  // = |m|
  int j_max = 0;
  std::vector<double> diag;    // diag[j - j_min]   = <J,M|cos^2|J,M>
  std::vector<double> couple;  // couple[j - j_min] = <J+2,M|cos^2|J,M>

  double diag_at(int j) const { return diag[std::size_t(j - j_min)]; }
  double couple_at(int j) const { return couple[std::size_t(j - j_min)]; }
};

Cos2Band cos2_band(int m, int j_max);

/// Theta-normalized associated Legendre function: P~_J^M(x) with
/// integral over x in [-1,1] of P~^2 equal to 1. The full spherical
/// harmonic is Y_J^M = P~_J^M(cos theta) e^{i M phi} / sqrt(2 pi).
double normalized_legendre(int j, int m, double x);

/// Values of P~_J^M(x) for the ladder J = j_min, j_min+2, ..., stored
/// consecutively (count entries). j_min must be |m| or |m|+1.
void normalized_legendre_ladder(int m, int j_min, int count, double x,
                                double* out);

}  // namespace rotsim
