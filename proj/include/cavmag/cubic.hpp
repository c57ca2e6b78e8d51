#pragma once

#include "cavmag/hamiltonian.hpp"

#include <array>
#include <complex>

namespace cavmag {

// Monic cubic lambda^3 + c2 lambda^2 + c1 lambda + c0.
struct MonicCubic {
    cplx c2;
    cplx c1;
    cplx c0;

    cplx operator()(cplx x) const noexcept { return ((x + c2) * x + c1) * x + c0; }
    cplx derivative(cplx x) const noexcept { return (3.0 * x + 2.0 * c2) * x + c1; }
};

// det(lambda I - m) expanded as a monic cubic.
MonicCubic characteristic_polynomial(const Matrix3c& m);

// Cardano roots of the depressed cubic, each followed by one Newton step on
// the original polynomial (kept only if it lowers the residual).
std::array<cplx, 3> solve_cubic(const MonicCubic& poly);

}  // namespace cavmag
