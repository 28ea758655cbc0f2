#ifndef SPECLAB_SPH_BASIS_HPP
#define SPECLAB_SPH_BASIS_HPP

#include <Eigen/Dense>
#include <vector>

#include "speclab/sphere_point.hpp"

namespace speclab {

// Real orthonormal spherical harmonics on the unit sphere:
//   Y_{l,0}  = Pn_l^0(cos th)
//   Y_{l,m}  = sqrt(2) Pn_l^m(cos th) cos(m ph),  m > 0
//   Y_{l,-m} = sqrt(2) Pn_l^m(cos th) sin(m ph),  m > 0
// with Pn the 1/sqrt(4pi)-normalized associated Legendre functions without
// the Condon-Shortley phase.

inline int sh_index(int l, int m) { return l * l + l + m; }
inline int sh_count(int L) { return (L + 1) * (L + 1); }
inline int lm_index(int l, int m) { return l * (l + 1) / 2 + m; } // packed, 0<=m<=l

// Packed tables of Pn_l^m(t), their theta-derivatives, and m Pn/sin(theta),
// all stable down to the poles.
void legendre_table(int L, double t, double sin_theta, std::vector<double>& P);
void legendre_dtheta_table(int L, const std::vector<double>& P,
                           std::vector<double>& dP);
void legendre_m_over_sin_table(int L, const std::vector<double>& P,
                               std::vector<double>& V);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Product grid: Gauss-Legendre in cos(theta), uniform in phi.  Integrates
// spherical-harmonic products of combined degree 2L exactly once
// ntheta >= 2L+2 and nphi >= 4L+2.
struct SphGrid {
    std::vector<double> t, wt; // cos(theta) nodes and weights
    int nphi = 0;
    double phi(int j) const { return 2.0 * M_PI * j / nphi; }
    double phi_weight() const { return 2.0 * M_PI / nphi; }
    int ntheta() const { return static_cast<int>(t.size()); }
};

SphGrid make_grid(int ntheta, int nphi);
SphGrid grid_for_degree(int L, int oversample = 2);

// Stereographic chart w = tan(theta/2) e^{i phi}; w=0 is the north pole t=+1.
SpherePoint chart_point(double t, double phi);

// All basis values at a finite chart point with |w| <= 1, packed by sh_index.
void basis_row(int L, double t, double sin_theta, double phi,
               std::vector<double>& row);

} // namespace speclab

#endif
