#include "orientstat/symmetry.hpp"

#include <cctype>
#include <cmath>
#include <deque>
#include <numbers>

namespace orientstat {

namespace {

constexpr int kClosureCap = 1000;
constexpr int kMaxFold = 50;

std::vector<UnitQuaternion> generators_for(const GroupSpec& spec) {
    using std::numbers::pi;
    const double s5 = std::sqrt(5.0);
    switch (spec.family) {
    case GroupFamily::cyclic:
        return {UnitQuaternion::unchecked(std::cos(pi / spec.n), 0, 0, std::sin(pi / spec.n))};
    case GroupFamily::dihedral:
        return {UnitQuaternion::unchecked(std::cos(pi / spec.n), 0, 0, std::sin(pi / spec.n)),
                UnitQuaternion::unchecked(0, 1, 0, 0)};
    case GroupFamily::tetrahedral:
        return {UnitQuaternion::unchecked(0.5, 0, 0, std::sqrt(3.0) / 2.0),
                UnitQuaternion::unchecked(0, 0, std::sqrt(6.0) / 3.0, std::sqrt(3.0) / 3.0)};
    case GroupFamily::octahedral:
        return {UnitQuaternion::unchecked(std::sqrt(0.5), 0, 0, std::sqrt(0.5)),
                UnitQuaternion::unchecked(0.5, 0.5, 0.5, 0.5)};
    case GroupFamily::icosahedral:
        return {UnitQuaternion::unchecked(0, 0, 0, 1),
                UnitQuaternion::unchecked(0.5, 0, (s5 - 1.0) / 4.0, (s5 + 1.0) / 4.0)};
    }
    throw std::logic_error("unreachable group family");
}

int find_element(const std::vector<UnitQuaternion>& elems, const UnitQuaternion& q) {
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (elems[i].same_rotation(q))
            return static_cast<int>(i);
    return -1;
}

} // namespace

GroupSpec GroupSpec::parse(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("empty group spec");
    const char head = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    const std::string_view digits = text.substr(1);
    GroupSpec spec;
    switch (head) {
    case 'T':
    case 'O':
    case 'I':
        if (!digits.empty())
            throw std::invalid_argument("group spec '" + std::string(text) + "' takes no fold count");
        spec.family = head == 'T'   ? GroupFamily::tetrahedral
                      : head == 'O' ? GroupFamily::octahedral
                                    : GroupFamily::icosahedral;
        return spec;
    case 'C':
    case 'D': {
        spec.family = head == 'C' ? GroupFamily::cyclic : GroupFamily::dihedral;
        if (digits.empty())
            throw std::invalid_argument("group spec '" + std::string(text) + "' needs a fold count");
        int n = 0;
        for (char c : digits) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad fold count in group spec '" + std::string(text) + "'");
            n = n * 10 + (c - '0');
            if (n > kMaxFold)
                throw std::invalid_argument("fold count exceeds " + std::to_string(kMaxFold));
        }
        const int min_n = spec.family == GroupFamily::cyclic ? 1 : 2;
        if (n < min_n)
            throw std::invalid_argument("fold count too small for group spec '" + std::string(text) + "'");
        spec.n = n;
        return spec;
    }
    default:
        throw std::invalid_argument("unknown group spec '" + std::string(text) + "'");
    }
}

std::string GroupSpec::name() const {
    switch (family) {
    case GroupFamily::cyclic: return "C" + std::to_string(n);
    case GroupFamily::dihedral: return "D" + std::to_string(n);
    case GroupFamily::tetrahedral: return "T";
    case GroupFamily::octahedral: return "O";
    case GroupFamily::icosahedral: return "I";
    }
    return "?";
}

int GroupSpec::order() const {
    switch (family) {
    case GroupFamily::cyclic: return n;
    case GroupFamily::dihedral: return 2 * n;
    case GroupFamily::tetrahedral: return 12;
    case GroupFamily::octahedral: return 24;
    case GroupFamily::icosahedral: return 60;
    }
    return 0;
}

FiniteRotationGroup build_group(const GroupSpec& spec) {
    const int min_n = spec.family == GroupFamily::dihedral ? 2 : 1;
    if ((spec.family == GroupFamily::cyclic || spec.family == GroupFamily::dihedral) &&
        (spec.n < min_n || spec.n > kMaxFold))
        throw std::invalid_argument("invalid fold count " + std::to_string(spec.n));
    const std::vector<UnitQuaternion> gens = generators_for(spec);

    FiniteRotationGroup group;
    group.spec_ = spec;
    group.generator_count_ = static_cast<int>(gens.size());
    group.elements_.push_back(UnitQuaternion::identity());
    group.words_.push_back({});

    // Breadth-first closure, generators applied in listed order. Elements are
    // identified up to quaternion sign; discovery order fixes the indexing.
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        for (std::size_t j = 0; j < gens.size(); ++j) {
            const UnitQuaternion next = group.elements_[cur] * gens[j];
            if (find_element(group.elements_, next) >= 0)
                continue;
            if (static_cast<int>(group.elements_.size()) >= kClosureCap)
                throw std::runtime_error("group closure exceeded " + std::to_string(kClosureCap) +
                                         " elements; generators are inconsistent");
            group.elements_.push_back(next);
            std::vector<int> word = group.words_[cur];
            word.push_back(static_cast<int>(j));
            group.words_.push_back(std::move(word));
            queue.push_back(static_cast<int>(group.elements_.size()) - 1);
        }
    }

    const int order = group.order();
    if (order != spec.order())
        throw std::runtime_error("group " + spec.name() + " closed with " + std::to_string(order) +
                                 " elements, expected " + std::to_string(spec.order()));

    group.matrices_.reserve(order);
    for (const auto& q : group.elements_)
        group.matrices_.push_back(q.matrix());

    group.cayley_.assign(static_cast<std::size_t>(order) * order, -1);
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            const int k = find_element(group.elements_, group.elements_[i] * group.elements_[j]);
            if (k < 0)
                throw std::runtime_error("group " + spec.name() + " is not closed under multiplication");
            group.cayley_[i * order + j] = k;
        }
    }

    group.inverse_.assign(order, -1);
    for (int i = 0; i < order; ++i) {
        const int inv = find_element(group.elements_, group.elements_[i].conjugate());
        if (inv < 0 || group.cayley_[i * order + inv] != 0)
            throw std::runtime_error("group " + spec.name() + " has a broken inverse table");
        group.inverse_[i] = inv;
    }

    return group;
}

std::pair<double, int> quotient_dist_so3(const UnitQuaternion& q1, const UnitQuaternion& q2,
                                         const FiniteRotationGroup& group, Metric m) {
    double best = std::numeric_limits<double>::infinity();
    int argmin = 0;
    for (int g = 0; g < group.order(); ++g) {
        const double d = dist_so3(q1 * group.element(g), q2, m);
        if (d < best) {
            best = d;
            argmin = g;
        }
    }
    return {best, argmin};
}

std::pair<double, int> quotient_dist_so3(const RotationMatrix& r1, const RotationMatrix& r2,
                                         const FiniteRotationGroup& group, Metric m) {
    return quotient_dist_so3(UnitQuaternion::from_matrix(r1), UnitQuaternion::from_matrix(r2),
                             group, m);
}

std::pair<double, int> quotient_dist_s2(const Direction& n1, const Direction& n2,
                                        const FiniteRotationGroup& group, Metric m) {
    double best = std::numeric_limits<double>::infinity();
    int argmin = 0;
    for (int g = 0; g < group.order(); ++g) {
        const double d = dist_s2(group.element_matrix(g).transpose() * n1, n2, m);
        if (d < best) {
            best = d;
            argmin = g;
        }
    }
    return {best, argmin};
}

} // namespace orientstat
