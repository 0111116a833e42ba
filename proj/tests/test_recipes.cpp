#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "finq/errors.hpp"
#include "finq/recipes.hpp"

using namespace finq;
using doctest::Approx;

namespace {

Config with(const std::string& text) {
    std::istringstream in(text);
    return Config::parse(in);
}

bool has_suffix(const std::string& s, const std::string& end) {
    return s.size() >= end.size() && s.compare(s.size() - end.size(), end.size(), end) == 0;
}

}  // namespace

TEST_CASE("every recipe runs and writes data") {
    const auto names = recipe_names();
    CHECK(names.size() == 13);
    for (const auto& n : names) {
        CAPTURE(n);
        CHECK_FALSE(recipe_summary(n).empty());
        const RecipeResult r = run_recipe(n);
        CHECK(r.name == n);
        CHECK_FALSE(r.comparisons.empty());
        CHECK_FALSE(r.parameters.empty());
        int csv = 0;
        for (const auto& f : r.files) {
            CHECK_FALSE(f.content.empty());
            if (has_suffix(f.suffix, ".csv")) {
                ++csv;
                CHECK(f.content.back() == '\n');
                CHECK(f.content.find('\r') == std::string::npos);
            }
        }
        CHECK(csv >= 1);
        for (const auto& c : r.comparisons) {
            CHECK_FALSE(c.quantity.empty());
            if (!c.informational) CHECK(std::isfinite(c.computed));
        }
        CHECK(comparison_table(r).rows.size() == r.comparisons.size());
        CHECK_FALSE(comparison_text(r).empty());
        CHECK_FALSE(parameter_text(r).empty());
    }
}

TEST_CASE("reruns are byte-identical") {
    for (const char* n : {"fig4a", "fig5e", "anchors"}) {
        const RecipeResult a = run_recipe(n), b = run_recipe(n);
        REQUIRE(a.files.size() == b.files.size());
        for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i].content == b.files[i].content);
        CHECK(comparison_text(a) == comparison_text(b));
    }
}

TEST_CASE("key quantities") {
    const RecipeResult a = run_recipe("fig4a");
    CHECK(a.find("anti-diagonal local maxima").computed == 2.0);
    CHECK(a.find("anti-diagonal local maxima").agrees);
    CHECK(a.find("swap asymmetry of the map").computed < 1e-12);

    const RecipeResult e = run_recipe("fig5e");
    CHECK(e.find("sign changes along W").computed >= 1.0);
    CHECK(e.find("envelope larger at small W").computed > 1.0);
    const RecipeResult f = run_recipe("fig5f");
    CHECK(f.find("sign changes along W").computed >= 1.0);

    const RecipeResult b = run_recipe("fig5b");
    CHECK(b.find("J2 > TK2 region narrows as L grows").agrees);
    CHECK(run_recipe("fig5c").find("J_sd increasing in Gamma").agrees);
    CHECK_THROWS_AS(a.find("no such quantity"), ValidationError);
}

TEST_CASE("overrides reach the computation") {
    const double base = run_recipe("fig4c").find("largest SNR on the branch").computed;
    const RecipeResult r = run_recipe("fig4c", with("V_D = 4\n"));
    CHECK(r.find("largest SNR on the branch").computed == Approx(2 * base).epsilon(1e-9));
    bool listed = false;
    for (const auto& [k, v] : r.parameters) listed = listed || (k == "V_D" && v == "4");
    CHECK(listed);
}

TEST_CASE("bad inputs") {
    CHECK_THROWS_AS(run_recipe("fig9z"), ValidationError);
    CHECK_THROWS_AS(recipe_summary("fig9z"), ValidationError);
    CHECK_THROWS_AS(run_recipe("fig4c", with("V_DD = 1\n")), ValidationError);
    CHECK_THROWS_AS(run_recipe("fig5e", with("W_points = 2.5\n")), ValidationError);
}
