#include "doctest.h"

#include <filesystem>

#include "fatou/error.hpp"
#include "fatou/io.hpp"
#include "fatou/random_fields.hpp"

using namespace fatou;

namespace {

std::string tmp(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "fatou_io_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

bool same(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

TEST_CASE("grid function binary and csv round trip") {
    Rng rng(1);
    for (int dim : {1, 2}) {
        const Grid g = make_grid(dim, dim == 1 ? 9 : 5, 2.5);
        const auto f = random_uniform(g, rng);
        write_grid_function(tmp("f.flgf"), f);
        CHECK(same(read_grid_function(tmp("f.flgf")), f));
        write_grid_function_csv(tmp("f.csv"), f);
        CHECK(same(read_grid_function_csv(tmp("f.csv"), g), f));
    }
    const auto bytes = read_text(tmp("f.flgf"));
    CHECK(bytes.substr(0, 4) == "FLGF");
    CHECK(bytes.size() == 4 + 12 + 8 + 8 * 1024);
    CHECK_THROWS_AS(read_grid_function(tmp("missing.flgf")), IoError);
    write_text(tmp("bad.flgf"), "XXXX");
    CHECK_THROWS_AS(read_grid_function(tmp("bad.flgf")), IoError);
    write_text(tmp("short.flgf"), bytes.substr(0, 100));
    CHECK_THROWS_AS(read_grid_function(tmp("short.flgf")), IoError);
}

TEST_CASE("half-space field and point set round trip") {
    Rng rng(2);
    const Grid g = make_grid(1, 8, 1.0);
    const auto u = poisson_extend(random_trig(g, rng, 5), dyadic_heights(1.0, 6));
    write_half_space_field(tmp("u.flhf"), u);
    const auto v = read_half_space_field(tmp("u.flhf"));
    CHECK(v.heights() == u.heights());
    for (std::size_t k = 0; k < u.levels(); ++k) CHECK(same(u.slice(k), v.slice(k)));

    const auto pts = cantor_points(g, cantor_measure(0.5, 6));
    write_point_set_csv(tmp("p.csv"), pts);
    const auto back = read_point_set_csv(tmp("p.csv"), g);
    CHECK(back.points == pts.points);
}

TEST_CASE("lipschitz graph file") {
    const Grid g = make_grid(1, 8, 1.0);
    const auto G = sawtooth_graph(g, 2.0, 3);
    write_lipschitz_graph(tmp("g.flg"), G);
    const auto H = read_lipschitz_graph(tmp("g.flg"));
    CHECK(H.M == G.M);
    CHECK(same(H.phi, G.phi));
    CHECK(same(read_grid_function(tmp("g.flg")), G.phi));
}
