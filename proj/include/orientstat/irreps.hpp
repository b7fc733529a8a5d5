#pragma once

#include "orientstat/symmetry.hpp"

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace orientstat {

/// One unitary irreducible representation: a d x d complex matrix per group
/// element, indexed like the group's element list.
struct Irrep {
    int dim = 1;
    std::vector<Eigen::MatrixXcd> image;
};

/// The complete list of unitary irreps of a group. irreps[0] is trivial and
/// sum of dim^2 equals the group order.
struct IrrepSet {
    std::vector<Irrep> irreps;
    int group_order = 0;

    int count() const { return static_cast<int>(irreps.size()); }
    int dim(int k) const { return irreps[k].dim; }
    const Eigen::MatrixXcd& image(int k, int g) const { return irreps[k].image[g]; }
};

/// Builds the irreps of the group from generator images, one product per
/// recorded generator word. Multidimensional families come out unitary;
/// homomorphism residuals above 1e-6 are a construction bug and throw.
IrrepSet irreps_of(const FiniteRotationGroup& group);

/// Conjugates a (possibly non-unitary) representation into a unitary one:
/// A = sum_g rho(g)^H rho(g), A = P^H P, output g -> P rho(g) P^{-1}.
std::vector<Eigen::MatrixXcd> unitarize(const std::vector<Eigen::MatrixXcd>& rep);

/// Complex-valued function on the group, element-indexed.
using GroupFunction = Eigen::VectorXcd;
/// Per-irrep matrix coefficients f_hat(k), shaped d_k x d_k.
using FourierCoefficients = std::vector<Eigen::MatrixXcd>;

/// f_hat(k) = (1/|G|) sum_g f(g) rho_k(g)^H
FourierCoefficients fourier_forward(const GroupFunction& f, const IrrepSet& irreps);
/// f(g) = sum_k d_k Tr(f_hat(k) rho_k(g))
GroupFunction fourier_inverse(const FourierCoefficients& coeffs, const IrrepSet& irreps);

} // namespace orientstat
