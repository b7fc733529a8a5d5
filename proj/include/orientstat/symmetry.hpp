#pragma once

#include "orientstat/geometry.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace orientstat {

enum class GroupFamily { cyclic, dihedral, tetrahedral, octahedral, icosahedral };

/// One of the five chiral point-group families: Cn, Dn, T, O, I.
struct GroupSpec {
    GroupFamily family = GroupFamily::cyclic;
    int n = 1; // fold count; meaningful for C and D only

    /// Accepts "C1".."C50", "D2".."D50", "T", "O", "I".
    static GroupSpec parse(std::string_view text);
    std::string name() const;
    int order() const;
};

/// Finite rotation group enumerated as unit quaternions with full
/// multiplication and inverse tables. Element 0 is the identity; the order
/// is the breadth-first closure of the generators, so indices are stable
/// across runs. Immutable once built.
class FiniteRotationGroup {
public:
    int order() const { return static_cast<int>(elements_.size()); }
    const GroupSpec& spec() const { return spec_; }
    const UnitQuaternion& element(int i) const { return elements_[i]; }
    const RotationMatrix& element_matrix(int i) const { return matrices_[i]; }
    int multiply(int i, int j) const { return cayley_[i * order() + j]; }
    int inverse(int i) const { return inverse_[i]; }
    /// Generator indices whose ordered product reconstructs element i.
    const std::vector<int>& word(int i) const { return words_[i]; }
    int generator_count() const { return generator_count_; }

    friend FiniteRotationGroup build_group(const GroupSpec& spec);

private:
    GroupSpec spec_;
    int generator_count_ = 0;
    std::vector<UnitQuaternion> elements_;
    std::vector<RotationMatrix> matrices_;
    std::vector<int> cayley_;
    std::vector<int> inverse_;
    std::vector<std::vector<int>> words_;
};

FiniteRotationGroup build_group(const GroupSpec& spec);

/// min over g of dist(R1*g, R2) together with the argmin element index.
std::pair<double, int> quotient_dist_so3(const UnitQuaternion& q1, const UnitQuaternion& q2,
                                         const FiniteRotationGroup& group, Metric m);
std::pair<double, int> quotient_dist_so3(const RotationMatrix& r1, const RotationMatrix& r2,
                                         const FiniteRotationGroup& group, Metric m);

/// min over g of dist(g^T n1, n2) together with the argmin element index.
std::pair<double, int> quotient_dist_s2(const Direction& n1, const Direction& n2,
                                        const FiniteRotationGroup& group, Metric m);

} // namespace orientstat
