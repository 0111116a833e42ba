#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "finq/errors.hpp"
#include "finq/grid.hpp"
#include "finq/io.hpp"

using namespace finq;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

Config parse(const std::string& text) {
    std::istringstream in(text);
    return Config::parse(in, "t.cfg");
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, -1e-17}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("csv output") {
    CsvTable t;
    t.header = {"name", "x", "n"};
    t.add({std::string("plain"), 0.5, 3LL});
    t.add({std::string("a,b"), -1.0, -7LL});
    t.add({std::string("say \"hi\""), 1e-20, 0LL});
    CHECK(to_csv(t) ==
          "name,x,n\n"
          "plain,0.5,3\n"
          "\"a,b\",-1,-7\n"
          "\"say \"\"hi\"\"\",9.9999999999999995e-21,0\n");
    CHECK_THROWS_AS(t.add({1.0}), ValidationError);
    CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.csv", "x"), ValidationError);
}

TEST_CASE("config parsing") {
    Config c = parse("# comment\n a = 1.5 \nname=abc # trailing\nlist = 1, 2,3\nn = 4\n\n");
    CHECK(c.number("a", 0.0) == 1.5);
    CHECK(c.text("name", "") == "abc");
    CHECK(c.numbers("list", {}) == std::vector<double>{1, 2, 3});
    CHECK(c.integer("n", 0) == 4);
    CHECK(c.number("missing", 7.0) == 7.0);
    CHECK_NOTHROW(c.reject_unknown());
    REQUIRE(c.resolved().size() == 5);
    CHECK(c.resolved()[0].first == "a");
    CHECK(c.resolved()[4].second == "7");

    Config u = parse("a = 1\nb = 2\n");
    u.number("a", 0.0);
    try {
        u.reject_unknown();
        FAIL("expected a rejection");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
    u.set("a", "3");
    CHECK(u.number("a", 0.0) == 3.0);

    CHECK_THROWS_AS(parse("a = 1\na = 2\n"), ValidationError);
    CHECK_THROWS_AS(parse("novalue\n"), ValidationError);
    CHECK_THROWS_AS(parse(" = 3\n"), ValidationError);
    CHECK_THROWS_AS(parse("a = x\n").number("a", 0.0), ValidationError);
    CHECK_THROWS_AS(parse("a = 1.5\n").integer("a", 0), ValidationError);
    CHECK_THROWS_AS(parse("a = 1,,2\n").numbers("a", {}), ValidationError);
    CHECK_THROWS_AS(Config::load("/nonexistent.cfg"), ValidationError);
    try {
        parse("a = 1\n\nbroken\n");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("t.cfg:3") != std::string::npos);
    }
}

TEST_CASE("axes and numbers") {
    CHECK(parse_axis("0:1:5", "x") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
    CHECK(parse_axis("2", "x") == std::vector<double>{2});
    CHECK(parse_axis("3,1,2", "x") == std::vector<double>{3, 1, 2});
    CHECK(parse_axis("1:1:1", "x") == std::vector<double>{1});
    for (const char* bad : {"0:1", "0:1:0", "0:1:2.5", "a:1:3", "", "1,,2"}) CHECK_THROWS_AS(parse_axis(bad, "x"), ValidationError);
    CHECK(parse_number(" 1e3", "v") == 1000.0);
    CHECK_THROWS_AS(parse_number("1e3x", "v"), ValidationError);
    CHECK_THROWS_AS(parse_number("", "v"), ValidationError);
}

TEST_CASE("grid helpers") {
    CHECK(linspace(0, 1, 1) == std::vector<double>{0});
    const auto g = linspace(-1, 1, 201);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == 1.0);
    CHECK(local_maxima({0, 1, 0, 2, 2, 1, 3}) == std::vector<std::size_t>{1, 3});
    CHECK(local_maxima({1, 2, 3}).empty());
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("line plot") {
    Series a{"first", {0, 1, 2}, {1, 4, 9}};
    Series b{"second <b>", {0, 1}, {2, 3}};
    const std::string svg = line_plot_svg({a, b}, {"t", "x [nm]", "y [eV]", false});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "<path") == 2);
    CHECK(svg.find("x [nm]") != std::string::npos);
    CHECK(svg.find("second &lt;b&gt;") != std::string::npos);
    CHECK(line_plot_svg({a, b}, {"t", "x", "y", false}) == line_plot_svg({a, b}, {"t", "x", "y", false}));
    Series bad{"bad", {0, 1, 2}, {1, NAN, -1}};
    try {
        line_plot_svg({bad}, {"t", "x", "y", true});
        FAIL("expected a rejection");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("index 1") != std::string::npos);
        CHECK(msg.find("index 2") != std::string::npos);
    }
}

TEST_CASE("heatmap") {
    Matrix m(2, 3, 1.0);
    m(1, 2) = 10.0;
    const std::string svg = heatmap_svg(m, {0, 1, 2}, {0, 1}, {"map", "x", "y", "G", ColorScale::log_viridis});
    CHECK(svg.find("</svg>") != std::string::npos);
    m(0, 1) = INFINITY;
    m(1, 0) = -2.0;
    try {
        heatmap_svg(m, {0, 1, 2}, {0, 1}, {"map", "x", "y", "G", ColorScale::log_viridis});
        FAIL("expected a rejection");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("(0,1)") != std::string::npos);
        CHECK(msg.find("(1,0)") != std::string::npos);
    }
    m(0, 1) = 0.0;
    CHECK_NOTHROW(heatmap_svg(m, {0, 1, 2}, {0, 1}, {"map", "x", "y", "G", ColorScale::diverging}));
    CHECK_THROWS_AS(heatmap_svg(m, {0, 1}, {0, 1}, {}), ValidationError);
}
