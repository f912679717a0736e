#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "ricci/report_io.hpp"

using namespace ricci;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    return out;
}

}  // namespace

TEST_CASE("format_number round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 4.0 + 1e-15}) {
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("trajectory CSV layout") {
    IntegratorConfig cfg;
    cfg.t_max = 1.0;
    const std::vector<double> y0{10.0, -1e-3};
    const Trajectory traj = simulate(SystemKind::Reparam, 2, y0, cfg);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x1,x2,x3,phi,psi,r1,r2,r3,S,V,neg_count");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        const auto cells = split(line, ',');
        REQUIRE(cells.size() == 12);
        const Sample& s = traj.samples[rows];
        CHECK(std::strtod(cells[0].c_str(), nullptr) == s.t);
        CHECK(std::strtod(cells[5].c_str(), nullptr) == s.psi);
        CHECK(std::strtod(cells[6].c_str(), nullptr) == s.diag.spectrum.r[0]);
        CHECK(std::stoi(cells[11]) == s.diag.negative_count);
        ++rows;
    }
    CHECK(rows == traj.samples.size());
}

TEST_CASE("report JSON schema and round trip") {
    ExperimentReport rep;
    rep.n = 3;
    rep.N = 4.0;
    rep.epsilon = 1e-3;
    rep.t_r1_negative = 120.24557875230974;
    rep.final_negative_count = 8;
    rep.expected_negative_count = 16;
    rep.slope_estimate = -7.0 / 3.0;
    rep.slope_target = -7.0 / 3.0;
    rep.decay = {true, 0.0};
    rep.divergence = {true, false};
    rep.monotonicity = {true, true};
    rep.initial_spectrum = RicciSpectrum({0.1, 0.2, 0.3}, {8, 8, 4});
    rep.termination = Termination::ReachedTmax;

    const auto j = nlohmann::json::parse(report_to_json(rep).dump());
    for (const char* key : {"n", "N", "epsilon", "t_r1_negative", "t_r2_negative", "final_negative_count",
                            "expected_negative_count", "slope_estimate", "slope_target", "decay_bound_holds",
                            "divergence", "monotonicity", "termination"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["n"] == 3);
    CHECK(j["t_r1_negative"].get<double>() == 120.24557875230974);
    CHECK(j["t_r2_negative"].is_null());
    CHECK(j["slope_estimate"].get<double>() == -7.0 / 3.0);
    CHECK(j["divergence"]["psi_phi_pow"] == true);
    CHECK(j["divergence"]["r1_phi"] == false);
    CHECK(j["monotonicity"]["phi_prime_gt_1"] == true);
    CHECK(j["termination"] == "ReachedTmax");
    CHECK(j["initial_spectrum"]["multiplicities"][0] == 8);
    CHECK(j["initial_spectrum"]["r"][2].get<double>() == 0.3);
}
