#ifndef CSR_BICUBIC_HPP
#define CSR_BICUBIC_HPP

#include <cmath>
#include <vector>

#include "csr/graph.hpp"

// C^1 bicubic interpolation (Catmull-Rom tensor product) of nodal fields on a
// GraphDomain grid. Ghost nodes come from quadratic extrapolation, so linear
// and quadratic data are reproduced exactly everywhere. Evaluation is allowed
// to spill one cell beyond the rectangle (edge-cell extrapolation) to keep
// integrator stages near the boundary alive; anything farther throws.

namespace csr {

class Bicubic {
public:
    Bicubic(const GraphDomain& dom, const std::vector<double>& values);

    double eval(double x, double t) const { return weighted(x, t, false, false); }
    double eval_dx(double x, double t) const { return weighted(x, t, true, false); }
    double eval_dt(double x, double t) const { return weighted(x, t, false, true); }

    bool inside(double x, double t) const {
        return x >= dom_.x0 && x <= dom_.x1 && t >= dom_.t0 && t <= dom_.t1;
    }

private:
    static void value_weights(double xi, double w[4]) {
        w[0] = 0.5 * (-xi + 2.0 * xi * xi - xi * xi * xi);
        w[1] = 1.0 + 0.5 * (-5.0 * xi * xi + 3.0 * xi * xi * xi);
        w[2] = 0.5 * (xi + 4.0 * xi * xi - 3.0 * xi * xi * xi);
        w[3] = 0.5 * (-xi * xi + xi * xi * xi);
    }
    static void deriv_weights(double xi, double w[4]) {
        w[0] = 0.5 * (-1.0 + 4.0 * xi - 3.0 * xi * xi);
        w[1] = 0.5 * (-10.0 * xi + 9.0 * xi * xi);
        w[2] = 0.5 * (1.0 + 8.0 * xi - 9.0 * xi * xi);
        w[3] = 0.5 * (-2.0 * xi + 3.0 * xi * xi);
    }

    double weighted(double x, double t, bool dx, bool dt) const;

    GraphDomain dom_;
    int pnx_ = 0, pnt_ = 0;            // padded sizes
    std::vector<double> padded_;       // (nx + 2) x (nt + 2), t fastest
    double pad(int i, int j) const { return padded_[(i + 1) * pnt_ + (j + 1)]; }
};

inline Bicubic::Bicubic(const GraphDomain& dom, const std::vector<double>& values)
    : dom_(dom) {
    if (static_cast<int>(values.size()) != dom.size())
        throw std::invalid_argument("field does not match grid");
    pnx_ = dom.nx + 2;
    pnt_ = dom.nt + 2;
    padded_.assign(static_cast<std::size_t>(pnx_) * pnt_, 0.0);
    auto& P = padded_;
    for (int i = 0; i < dom.nx; ++i)
        for (int j = 0; j < dom.nt; ++j)
            P[(i + 1) * pnt_ + (j + 1)] = values[dom.idx(i, j)];
    // Quadratic extrapolation ghosts, t-direction first, then x including
    // the fresh ghost columns (covers the corners).
    for (int i = 1; i <= dom.nx; ++i) {
        P[i * pnt_ + 0] = 3.0 * P[i * pnt_ + 1] - 3.0 * P[i * pnt_ + 2] + P[i * pnt_ + 3];
        P[i * pnt_ + (pnt_ - 1)] = 3.0 * P[i * pnt_ + (pnt_ - 2)] -
                                   3.0 * P[i * pnt_ + (pnt_ - 3)] + P[i * pnt_ + (pnt_ - 4)];
    }
    for (int j = 0; j < pnt_; ++j) {
        P[0 * pnt_ + j] = 3.0 * P[1 * pnt_ + j] - 3.0 * P[2 * pnt_ + j] + P[3 * pnt_ + j];
        P[(pnx_ - 1) * pnt_ + j] = 3.0 * P[(pnx_ - 2) * pnt_ + j] -
                                   3.0 * P[(pnx_ - 3) * pnt_ + j] + P[(pnx_ - 4) * pnt_ + j];
    }
}

inline double Bicubic::weighted(double x, double t, bool dx, bool dt) const {
    const double hx = dom_.hx(), ht = dom_.ht();
    if (x < dom_.x0 - hx || x > dom_.x1 + hx || t < dom_.t0 - ht || t > dom_.t1 + ht)
        throw NumericError("interpolation point outside the grid");
    int ix = static_cast<int>(std::floor((x - dom_.x0) / hx));
    int jt = static_cast<int>(std::floor((t - dom_.t0) / ht));
    ix = std::max(0, std::min(dom_.nx - 2, ix));
    jt = std::max(0, std::min(dom_.nt - 2, jt));
    const double xi = (x - dom_.x(ix)) / hx;
    const double et = (t - dom_.t(jt)) / ht;
    double wx[4], wt[4];
    if (dx) deriv_weights(xi, wx);
    else value_weights(xi, wx);
    if (dt) deriv_weights(et, wt);
    else value_weights(et, wt);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double row = 0.0;
        for (int b = 0; b < 4; ++b) row += wt[b] * pad(ix - 1 + a, jt - 1 + b);
        acc += wx[a] * row;
    }
    if (dx) acc /= hx;
    if (dt) acc /= ht;
    return acc;
}

}  // namespace csr

#endif
