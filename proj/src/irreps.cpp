#include "orientstat/irreps.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

namespace orientstat {

namespace {

using Eigen::MatrixXcd;
using std::numbers::pi;
const std::complex<double> kI(0.0, 1.0);

MatrixXcd scalar1(std::complex<double> v) {
    MatrixXcd m(1, 1);
    m(0, 0) = v;
    return m;
}

MatrixXcd real3(std::initializer_list<double> rows) {
    Eigen::Matrix3d m;
    int idx = 0;
    for (double v : rows)
        m(idx / 3, idx % 3) = v, ++idx;
    return m.cast<std::complex<double>>();
}

MatrixXcd rot2(double angle) {
    Eigen::Matrix2d m;
    m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return m.cast<std::complex<double>>();
}

MatrixXcd flip2() {
    Eigen::Matrix2d m;
    m << 1, 0, 0, -1;
    return m.cast<std::complex<double>>();
}

/// Generator images (sigma, tau, ...) for every irrep of the family,
/// trivial representation first. Some entries are non-unitary and are
/// conjugated to unitary form by the caller.
std::vector<std::vector<MatrixXcd>> generator_images(const GroupSpec& spec) {
    std::vector<std::vector<MatrixXcd>> reps;
    switch (spec.family) {
    case GroupFamily::cyclic: {
        const int n = spec.n;
        for (int k = 0; k < n; ++k)
            reps.push_back({scalar1(std::exp(2.0 * pi * kI * double(k) / double(n)))});
        return reps;
    }
    case GroupFamily::dihedral: {
        const int n = spec.n;
        reps.push_back({scalar1(1), scalar1(1)});
        reps.push_back({scalar1(1), scalar1(-1)});
        if (n % 2 == 0) {
            reps.push_back({scalar1(-1), scalar1(1)});
            reps.push_back({scalar1(-1), scalar1(-1)});
        }
        const int two_dim = n % 2 == 1 ? (n - 1) / 2 : n / 2 - 1;
        for (int k = 1; k <= two_dim; ++k)
            reps.push_back({rot2(2.0 * pi * k / n), flip2()});
        return reps;
    }
    case GroupFamily::tetrahedral: {
        const std::complex<double> w = std::exp(2.0 * pi * kI / 3.0);
        reps.push_back({scalar1(1), scalar1(1)});
        reps.push_back({scalar1(w), scalar1(1)});
        reps.push_back({scalar1(w * w), scalar1(1)});
        reps.push_back({real3({-1, -1, -1, 1, 0, 0, 0, 0, 1}),
                        real3({-1, -1, -1, 0, 0, 1, 0, 1, 0})});
        return reps;
    }
    case GroupFamily::octahedral: {
        MatrixXcd s2(2, 2), t2(2, 2);
        s2 << 1, 0, -1, -1;
        t2 << 0, 1, -1, -1;
        reps.push_back({scalar1(1), scalar1(1)});
        reps.push_back({scalar1(-1), scalar1(1)});
        reps.push_back({s2, t2});
        reps.push_back({real3({-1, -1, -1, 1, 0, 0, 0, 1, 0}),
                        real3({0, 1, 0, -1, -1, -1, 0, 0, 1})});
        reps.push_back({real3({1, 1, 1, -1, 0, 0, 0, -1, 0}),
                        real3({0, 1, 0, -1, -1, -1, 0, 0, 1})});
        return reps;
    }
    case GroupFamily::icosahedral: {
        MatrixXcd s4(4, 4), t4(4, 4), s5(5, 5), t5(5, 5);
        s4 << -1, -1, -1, -1,
               0,  0,  1,  0,
               0,  1,  0,  0,
               0,  0,  0,  1;
        t4 <<  0,  0,  0,  1,
               1,  0,  0,  0,
               0,  0,  1,  0,
               0,  1,  0,  0;
        s5 <<  0,  1,  0,  0,  0,
               1,  0,  0,  0,  0,
               0,  0,  1,  0,  0,
              -1, -1,  0, -1,  0,
               0,  1,  0,  1,  1;
        t5 <<  0,  0,  1,  0,  0,
               0, -1, -1, -1, -1,
              -1,  0,  0,  0,  1,
               0,  1,  0,  0,  0,
               1,  0,  1,  0,  0;
        reps.push_back({scalar1(1), scalar1(1)});
        reps.push_back({s4, t4});
        reps.push_back({s5, t5});
        for (double xk : {(-1.0 + std::sqrt(5.0)) / 2.0, (-1.0 - std::sqrt(5.0)) / 2.0}) {
            reps.push_back({real3({-xk, 1, -xk, xk, xk, -1, 0, 0, -1}),
                            real3({0, 1 + xk, -1 - xk, -1, -1, xk, -xk, -xk, 1})});
        }
        return reps;
    }
    }
    throw std::logic_error("unreachable group family");
}

} // namespace

std::vector<MatrixXcd> unitarize(const std::vector<MatrixXcd>& rep) {
    const auto dim = rep.front().rows();
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (const auto& r : rep)
        a += r.adjoint() * r;
    const Eigen::LLT<MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("unitarization failed: averaging matrix is not positive definite");
    // LLT yields a = L L^H; with p = L^H we get a = p^H p.
    const MatrixXcd p = MatrixXcd(llt.matrixL()).adjoint();
    const MatrixXcd p_inv = p.inverse();
    std::vector<MatrixXcd> out;
    out.reserve(rep.size());
    for (const auto& r : rep)
        out.push_back(p * r * p_inv);
    return out;
}

IrrepSet irreps_of(const FiniteRotationGroup& group) {
    const int order = group.order();
    const auto gen_images = generator_images(group.spec());

    IrrepSet set;
    set.group_order = order;
    int dim_sq_sum = 0;
    for (const auto& gens : gen_images) {
        Irrep irrep;
        irrep.dim = static_cast<int>(gens.front().rows());
        dim_sq_sum += irrep.dim * irrep.dim;
        irrep.image.reserve(order);
        for (int g = 0; g < order; ++g) {
            MatrixXcd m = MatrixXcd::Identity(irrep.dim, irrep.dim);
            for (int letter : group.word(g))
                m = m * gens[letter];
            irrep.image.push_back(std::move(m));
        }
        if (irrep.dim > 1)
            irrep.image = unitarize(irrep.image);
        set.irreps.push_back(std::move(irrep));
    }

    if (dim_sq_sum != order)
        throw std::logic_error("irrep dimensions do not sum to the group order");

    // A residual here means the generator-word bookkeeping is broken.
    for (const auto& irrep : set.irreps) {
        for (int i = 0; i < order; ++i) {
            for (int j = 0; j < order; ++j) {
                const double err = (irrep.image[group.multiply(i, j)] -
                                    irrep.image[i] * irrep.image[j]).cwiseAbs().maxCoeff();
                if (err > 1e-6)
                    throw std::logic_error("irrep of " + group.spec().name() +
                                           " violates the homomorphism property");
            }
        }
    }

    return set;
}

FourierCoefficients fourier_forward(const GroupFunction& f, const IrrepSet& irreps) {
    if (f.size() != irreps.group_order)
        throw std::invalid_argument("group function length does not match the group order");
    FourierCoefficients coeffs;
    coeffs.reserve(irreps.count());
    for (int k = 0; k < irreps.count(); ++k) {
        const int d = irreps.dim(k);
        MatrixXcd c = MatrixXcd::Zero(d, d);
        for (int g = 0; g < irreps.group_order; ++g)
            c += f(g) * irreps.image(k, g).adjoint();
        coeffs.push_back(c / double(irreps.group_order));
    }
    return coeffs;
}

GroupFunction fourier_inverse(const FourierCoefficients& coeffs, const IrrepSet& irreps) {
    GroupFunction f = GroupFunction::Zero(irreps.group_order);
    for (int g = 0; g < irreps.group_order; ++g) {
        std::complex<double> v = 0.0;
        for (int k = 0; k < irreps.count(); ++k)
            v += double(irreps.dim(k)) * (coeffs[k] * irreps.image(k, g)).trace();
        f(g) = v;
    }
    return f;
}

} // namespace orientstat
