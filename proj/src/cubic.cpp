#include "cavmag/cubic.hpp"

#include <cmath>

namespace cavmag {

MonicCubic characteristic_polynomial(const Matrix3c& m) {
    const cplx trace = m.trace();
    const cplx minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)
                      + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)
                      + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    return MonicCubic{-trace, minors, -m.determinant()};
}

namespace {

cplx polish(const MonicCubic& poly, cplx root) {
    const cplx f = poly(root);
    const cplx df = poly.derivative(root);
    if (df == cplx{0.0, 0.0}) {
        return root;
    }
    const cplx candidate = root - f / df;
    if (!std::isfinite(candidate.real()) || !std::isfinite(candidate.imag())) {
        return root;
    }
    return std::abs(poly(candidate)) < std::abs(f) ? candidate : root;
}

}  // namespace

std::array<cplx, 3> solve_cubic(const MonicCubic& poly) {
    const cplx a = poly.c2;
    const cplx b = poly.c1;
    const cplx c = poly.c0;
    const cplx shift = -a / 3.0;

    // x^3 + p x + q = 0 with lambda = x + shift
    const cplx p = b - a * a / 3.0;
    const cplx q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    // larger of the two cube-root arguments avoids cancellation
    cplx u3 = -q / 2.0 + disc;
    const cplx alt = -q / 2.0 - disc;
    if (std::abs(alt) > std::abs(u3)) {
        u3 = alt;
    }

    std::array<cplx, 3> roots;
    if (std::abs(u3) == 0.0) {
        // p == q == 0: triple root
        roots.fill(shift);
    } else {
        const cplx u = std::pow(u3, 1.0 / 3.0);
        const cplx omega{-0.5, std::sqrt(3.0) / 2.0};
        cplx uk = u;
        for (int k = 0; k < 3; ++k) {
            const cplx vk = -p / (3.0 * uk);
            roots[k] = uk + vk + shift;
            uk *= omega;
        }
    }
    for (auto& r : roots) {
        r = polish(poly, r);
    }
    return roots;
}

}  // namespace cavmag
