#include "orientstat/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace orientstat {

namespace {

constexpr double kNormTol = 1e-6;

bool skip_line(const std::string& line) {
    for (char ch : line) {
        if (ch == '#')
            return true;
        if (!std::isspace(static_cast<unsigned char>(ch)))
            return false;
    }
    return true;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line))
            continue;
        fn(line, line_no);
    }
}

std::vector<double> parse_fields(const std::string& line, int line_no) {
    std::istringstream ss(line);
    std::vector<double> fields;
    double v;
    while (ss >> v)
        fields.push_back(v);
    std::string rest;
    if (ss.clear(), ss >> rest)
        fail(line_no, "trailing non-numeric content '" + rest + "'");
    return fields;
}

} // namespace

std::vector<UnitQuaternion> parse_quaternions(std::istream& in) {
    std::vector<UnitQuaternion> out;
    for_each_data_line(in, [&](const std::string& line, int line_no) {
        const auto f = parse_fields(line, line_no);
        if (f.size() != 4)
            fail(line_no, "expected 4 fields 'w x y z', got " + std::to_string(f.size()));
        const double n = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2] + f[3] * f[3]);
        if (std::abs(n - 1.0) > kNormTol)
            fail(line_no, "quaternion norm " + std::to_string(n) + " deviates beyond 1e-6");
        out.push_back(UnitQuaternion::unchecked(f[0] / n, f[1] / n, f[2] / n, f[3] / n));
    });
    return out;
}

std::vector<Direction> parse_directions(std::istream& in) {
    std::vector<Direction> out;
    for_each_data_line(in, [&](const std::string& line, int line_no) {
        const auto f = parse_fields(line, line_no);
        if (f.size() != 3)
            fail(line_no, "expected 3 fields 'x y z', got " + std::to_string(f.size()));
        const Direction v(f[0], f[1], f[2]);
        const double n = v.norm();
        if (std::abs(n - 1.0) > kNormTol)
            fail(line_no, "direction norm " + std::to_string(n) + " deviates beyond 1e-6");
        out.push_back(v / n);
    });
    return out;
}

LabeledPoints parse_labeled_points(std::istream& in) {
    LabeledPoints out;
    bool labeled = false;
    bool first = true;
    for_each_data_line(in, [&](const std::string& line, int line_no) {
        const auto f = parse_fields(line, line_no);
        if (f.size() != 3 && f.size() != 4)
            fail(line_no, "expected 'x y z' or 'x y z label'");
        if (first) {
            labeled = f.size() == 4;
            first = false;
        } else if (labeled != (f.size() == 4)) {
            fail(line_no, "labels must appear on every line or on none");
        }
        const Direction v(f[0], f[1], f[2]);
        const double n = v.norm();
        if (std::abs(n - 1.0) > kNormTol)
            fail(line_no, "direction norm " + std::to_string(n) + " deviates beyond 1e-6");
        out.points.push_back(v / n);
        if (labeled) {
            if (f[3] != std::floor(f[3]) || f[3] < 0)
                fail(line_no, "label must be a nonnegative integer");
            out.labels.push_back(static_cast<int>(f[3]));
        }
    });
    return out;
}

namespace {

template <typename T, typename Parser>
T load_file(const std::string& path, Parser&& parser) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    try {
        return parser(in);
    } catch (const ParseError& err) {
        throw ParseError(path + ": " + err.what());
    }
}

} // namespace

std::vector<UnitQuaternion> load_quaternions(const std::string& path) {
    return load_file<std::vector<UnitQuaternion>>(path, [](std::istream& in) {
        return parse_quaternions(in);
    });
}

std::vector<Direction> load_directions(const std::string& path) {
    return load_file<std::vector<Direction>>(path, [](std::istream& in) {
        return parse_directions(in);
    });
}

LabeledPoints load_labeled_points(const std::string& path) {
    return load_file<LabeledPoints>(path, [](std::istream& in) {
        return parse_labeled_points(in);
    });
}

void write_labeled_points(std::ostream& out, const LabeledPoints& data) {
    char buf[128];
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        const auto& p = data.points[i];
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", p.x(), p.y(), p.z());
        out << buf;
        if (!data.labels.empty())
            out << ' ' << data.labels[i];
        out << '\n';
    }
}

void save_labeled_points(const std::string& path, const LabeledPoints& data) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    write_labeled_points(out, data);
}

void write_quaternions(std::ostream& out, std::span<const UnitQuaternion> quats) {
    char buf[160];
    for (const auto& q : quats) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", q.w, q.x, q.y, q.z);
        out << buf;
    }
}

void save_quaternions(const std::string& path, std::span<const UnitQuaternion> quats) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    write_quaternions(out, quats);
}

} // namespace orientstat
