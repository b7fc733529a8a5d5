#include "orientstat/io.hpp"
#include "orientstat/sampling.hpp"

#include <doctest.h>

#include <sstream>

using namespace orientstat;

TEST_CASE("quaternion files parse with comments and near-unit normalization") {
    std::istringstream in(
        "# orientation list\n"
        "1 0 0 0\n"
        "\n"
        "0.7071067811865476 0.7071067811865476 0 0\n"
        "0.9999997 0 0 0\n");
    const auto quats = parse_quaternions(in);
    REQUIRE(quats.size() == 3);
    CHECK(quats[0].w == doctest::Approx(1.0));
    CHECK(quats[2].norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("bad quaternion lines are rejected with their line number") {
    std::istringstream short_line("1 0 0\n");
    CHECK_THROWS_WITH_AS((void)parse_quaternions(short_line), doctest::Contains("line 1"),
                         ParseError);
    std::istringstream off_norm("# c\n0.9 0 0 0\n");
    CHECK_THROWS_WITH_AS((void)parse_quaternions(off_norm), doctest::Contains("line 2"),
                         ParseError);
    std::istringstream junk("1 0 0 zero\n");
    CHECK_THROWS_AS((void)parse_quaternions(junk), ParseError);
}

TEST_CASE("direction files parse and round trip") {
    std::istringstream in("0 0 1\n1 0 0\n");
    const auto dirs = parse_directions(in);
    REQUIRE(dirs.size() == 2);
    CHECK((dirs[0] - Direction(0, 0, 1)).norm() < 1e-12);

    std::istringstream bad("0 0 1.1\n");
    CHECK_THROWS_AS((void)parse_directions(bad), ParseError);
}

TEST_CASE("labeled points accept all-or-none labels") {
    std::istringstream labeled("0 0 1 2\n1 0 0 0\n");
    const LabeledPoints data = parse_labeled_points(labeled);
    REQUIRE(data.points.size() == 2);
    CHECK(data.labels == std::vector<int>{2, 0});

    std::istringstream bare("0 0 1\n1 0 0\n");
    CHECK(parse_labeled_points(bare).labels.empty());

    std::istringstream mixed("0 0 1 2\n1 0 0\n");
    CHECK_THROWS_AS((void)parse_labeled_points(mixed), ParseError);
}

TEST_CASE("writers round trip at full precision") {
    Rng rng(101);
    std::vector<UnitQuaternion> quats;
    for (int i = 0; i < 20; ++i)
        quats.push_back(rng.rotation());
    std::ostringstream out;
    write_quaternions(out, quats);
    std::istringstream in(out.str());
    const auto back = parse_quaternions(in);
    REQUIRE(back.size() == quats.size());
    for (std::size_t i = 0; i < quats.size(); ++i)
        CHECK(std::abs(quats[i].dot(back[i])) == doctest::Approx(1.0).epsilon(1e-15));

    LabeledPoints data;
    for (int i = 0; i < 10; ++i) {
        data.points.push_back(rng.direction());
        data.labels.push_back(i % 3);
    }
    std::ostringstream pts;
    write_labeled_points(pts, data);
    std::istringstream pin(pts.str());
    const LabeledPoints parsed = parse_labeled_points(pin);
    CHECK(parsed.labels == data.labels);
    for (std::size_t i = 0; i < data.points.size(); ++i)
        CHECK((parsed.points[i] - data.points[i]).norm() < 1e-15);
}
