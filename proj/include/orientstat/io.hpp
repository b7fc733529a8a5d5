#pragma once

#include "orientstat/cluster.hpp"

#include <iosfwd>
#include <string>

namespace orientstat {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One quaternion per line, "w x y z". Lines starting with '#' and blank
/// lines are skipped. Norm deviations up to 1e-6 are normalized away;
/// anything worse is rejected with the offending line number.
std::vector<UnitQuaternion> parse_quaternions(std::istream& in);
std::vector<UnitQuaternion> load_quaternions(const std::string& path);

/// One unit vector per line, "x y z"; same comment and tolerance rules.
std::vector<Direction> parse_directions(std::istream& in);
std::vector<Direction> load_directions(const std::string& path);

/// "x y z" or "x y z label" per line; labels must be present on all lines
/// or on none.
LabeledPoints parse_labeled_points(std::istream& in);
LabeledPoints load_labeled_points(const std::string& path);

void write_labeled_points(std::ostream& out, const LabeledPoints& data);
void save_labeled_points(const std::string& path, const LabeledPoints& data);

void write_quaternions(std::ostream& out, std::span<const UnitQuaternion> quats);
void save_quaternions(const std::string& path, std::span<const UnitQuaternion> quats);

} // namespace orientstat
