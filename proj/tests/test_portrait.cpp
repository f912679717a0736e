#include <doctest.h>

#include <cstdlib>
#include <regex>
#include <string>

#include "ricci/gw_space.hpp"
#include "ricci/portrait.hpp"

using namespace ricci;

namespace {

std::size_t count(const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("portrait is a well-formed standalone SVG") {
    const std::string svg = render_portrait(PortraitConfig{});
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
    CHECK(count(svg, "<g") == count(svg, "</g>"));
    CHECK(count(svg, "class=\"arrow\"") > 50);
    CHECK(svg.find("submersion-axis") != std::string::npos);
}

TEST_CASE("arrows on the submersion axis are horizontal") {
    const std::string svg = render_portrait(PortraitConfig{});
    const std::regex arrow(R"re(data-psi="0\.000"><line x1="([-0-9.]+)" y1="([-0-9.]+)" x2="([-0-9.]+)" y2="([-0-9.]+)")re");
    std::size_t seen = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), arrow); it != std::sregex_iterator(); ++it) {
        CHECK((*it)[2].str() == (*it)[4].str());
        CHECK((*it)[1].str() != (*it)[3].str());
        ++seen;
    }
    CHECK(seen >= 10);
}

TEST_CASE("the Einstein point gets a fixed-point marker") {
    const std::string svg = render_portrait(PortraitConfig{});
    CHECK(count(svg, "class=\"fixed-point\"") == 1);
    CHECK(svg.find("class=\"fixed-point\" data-phi=\"2.000\" data-psi=\"0.000\"") != std::string::npos);
}

TEST_CASE("output is deterministic and includes trajectories") {
    PortraitConfig cfg;
    cfg.starts = {{4.0, -0.5}, {3.0, 1.0}};
    const std::string a = render_portrait(cfg);
    const std::string b = render_portrait(cfg);
    CHECK(a == b);
    CHECK(count(a, "class=\"trajectory\"") == 2);
}

TEST_CASE("invalid boxes are rejected") {
    PortraitConfig cfg;
    cfg.phi_min = 3.0;
    cfg.phi_max = 2.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.phi_min = -1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.phi_min = 1.0;
    cfg.phi_max = 2.0;
    cfg.psi_min = 3.0;
    cfg.psi_max = 4.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = {};
    cfg.cols = 1;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}
