#include <doctest.h>

#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "wxroute/error.hpp"
#include "wxroute/grid.hpp"

using namespace wxroute;

namespace {

GeoPoint east_of_origin(double nm) { return destination_point({0, 0}, 90.0, nm); }

Errc code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("rank count follows ceil(D / d_n) - 1") {
    CHECK(interior_rank_count(100.0, 25.0) == 3);
    CHECK(interior_rank_count(100.0, 10.0) == 9);
    CHECK(interior_rank_count(100.0 + 1e-12, 25.0) == 3);
    CHECK(interior_rank_count(101.0, 25.0) == 4);
    CHECK(interior_rank_count(25.0, 25.0) == 0);
    CHECK(interior_rank_count(30.0, 25.0) == 1);
}

TEST_CASE("100 nm route at d_n = 25 gives 3 x 3 with anchors at quarter points") {
    const GeoPoint start{0, 0};
    const GeoPoint finish = east_of_origin(100.0);
    const RoutingGrid g = build_grid({start, finish, 25.0});
    REQUIRE(g.size() == 3);
    CHECK(g.rank_count() == 5);
    for (std::size_t k = 1; k <= 3; ++k) {
        CHECK(g.nodes_in_rank(k) == 3);
        CHECK(haversine_distance(start, g.anchor(k)) == doctest::Approx(25.0 * static_cast<double>(k)).epsilon(1e-9));
    }
    CHECK(g.nodes_in_rank(0) == 1);
    CHECK(g.nodes_in_rank(4) == 1);
}

TEST_CASE("100 nm route at d_n = 10 gives 9 x 9") {
    const RoutingGrid g = build_grid({{0, 0}, east_of_origin(100.0), 10.0});
    CHECK(g.size() == 9);
    for (std::size_t k = 1; k <= 9; ++k) CHECK(g.nodes_in_rank(k) == 9);
}

TEST_CASE("equatorial grid: centre node on the anchor, neighbours due north and south") {
    const double dn = kEarthRadiusNm * kPi / 180.0 * 10.0 / 8.0; // 8 segments over 10 degrees
    const RoutingGrid g = build_grid({{0, 0}, {0, 10}, dn});
    REQUIRE(g.size() == 7);
    const GeoPoint centre = g.node({4, 3});
    CHECK(centre.lat() == doctest::Approx(0.0));
    CHECK(centre.lon() == doctest::Approx(5.0).epsilon(1e-12));
    const GeoPoint port = g.node({4, 2});
    const GeoPoint stbd = g.node({4, 4});
    CHECK(port.lat() > 0.0); // eastbound: port side is north
    CHECK(stbd.lat() < 0.0);
    CHECK(port.lon() == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(stbd.lon() == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(haversine_distance(centre, port) == doctest::Approx(dn).epsilon(5e-3));
    CHECK(haversine_distance(centre, stbd) == doctest::Approx(dn).epsilon(5e-3));
}

TEST_CASE("cross-track offsets are integer or half-integer multiples of d_n") {
    for (const auto& [finish, dn] : {std::pair{GeoPoint{-21.2, -159.8}, 20.0}, std::pair{GeoPoint{-18.0, -175.0}, 15.0},
                                     std::pair{GeoPoint{-20.0, -170.0}, 40.0}}) {
        const GeoPoint start{-21.1, -175.2};
        const RoutingGrid g = build_grid({start, finish, dn});
        const std::size_t n = g.size();
        for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t p = 0; p < n; ++p) {
                const double expect = std::fabs(cross_track_offset_units(n, p)) * dn;
                const double got = haversine_distance(g.anchor(k), g.node({k, p}));
                if (expect == 0.0) {
                    CHECK(got < 1e-9);
                } else {
                    CHECK(std::fabs(got - expect) <= 5e-3 * expect);
                }
                if (p > 0) {
                    const double step = haversine_distance(g.node({k, p - 1}), g.node({k, p}));
                    CHECK(std::fabs(step - dn) <= 5e-3 * dn);
                }
            }
        }
    }
}

TEST_CASE("even n uses half-integer offsets") {
    CHECK(cross_track_offset_units(4, 0) == -1.5);
    CHECK(cross_track_offset_units(4, 3) == 1.5);
    CHECK(cross_track_offset_units(3, 0) == -1.0);
    CHECK(cross_track_offset_units(3, 1) == 0.0);
    CHECK(cross_track_offset_units(1, 0) == 0.0);
}

TEST_CASE("build_grid is deterministic bit for bit") {
    const GridSpec spec{{-21.1, -175.2}, {-20.0, -159.8}, 12.5};
    const RoutingGrid a = build_grid(spec);
    const RoutingGrid b = build_grid(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.rank_count(); ++k) {
        for (std::size_t p = 0; p < a.nodes_in_rank(k); ++p) {
            const GeoPoint x = a.node({k, p}), y = b.node({k, p});
            CHECK(std::memcmp(&x, &y, sizeof x) == 0);
        }
    }
}

TEST_CASE("successors give full next-rank connectivity") {
    const RoutingGrid g = build_grid({{0, 0}, east_of_origin(60.0), 10.0});
    REQUIRE(g.size() == 5);
    CHECK(g.successors({0, 0}).size() == 5);
    CHECK(g.successors({2, 3}).size() == 5);
    const auto last = g.successors({5, 4});
    REQUIRE(last.size() == 1);
    CHECK(last.front() == NodeIndex{6, 0});
    CHECK(g.successors({6, 0}).empty());
    CHECK_THROWS_AS(g.successors({2, 7}), Error);
}

TEST_CASE("start-to-finish DAG holds n*n + 2 nodes") {
    const RoutingGrid g = build_grid({{0, 0}, east_of_origin(50.0), 10.0});
    std::set<std::pair<std::size_t, std::size_t>> seen{{0, 0}};
    std::vector<NodeIndex> frontier{{0, 0}};
    while (!frontier.empty()) {
        std::vector<NodeIndex> next;
        for (const auto& n : frontier) {
            for (const auto& s : g.successors(n)) {
                CHECK(s.rank == n.rank + 1);
                if (seen.insert({s.rank, s.position}).second) next.push_back(s);
            }
        }
        frontier = std::move(next);
    }
    CHECK(seen.size() == g.size() * g.size() + 2);
}

TEST_CASE("grid construction errors") {
    CHECK(code_of([] { build_grid({{0, 0}, east_of_origin(20.0), 25.0}); }) == Errc::GridTooSmall);
    CHECK(code_of([] { build_grid({{0, 0}, east_of_origin(20.0), 0.5}); }) == Errc::InvalidArgument);
    CHECK(code_of([] { build_grid({{0, 0}, {0, 0}, 5.0}); }) == Errc::InvalidArgument);
    CHECK(code_of([] { build_grid({{84.5, 0}, {84.5, 20}, 20.0}); }) == Errc::PoleProximity);
}

TEST_CASE("grid CSV dump") {
    const RoutingGrid g = build_grid({{0, 0}, east_of_origin(100.0), 25.0});
    std::ostringstream os;
    g.write_csv(os);
    const std::string s = os.str();
    CHECK(s.rfind("rank,position,lat,lon\n0,0,0,0\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : s) lines += c == '\n';
    CHECK(lines == 1 + 9 + 2);
}
