// Copyright 2026 The q4dr Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "q4dr/q4dr.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "q4dr_capi_test";
    fs::create_directories(dir);
    return dir;
}

void fast_configs(q4dr_qaoa_config* q, q4dr_solver_config* s) {
    q4dr_qaoa_config_default(q);
    q4dr_solver_config_default(s);
    q->depth = 2;
    q->max_iter = 30;
    q->seed = 5;
    s->seed = 5;
    s->threads = 2;
    s->restarts = 4;
    s->sweeps = 2000;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(q4dr_version()) > 0);
    CHECK(std::string(q4dr_status_name(Q4DR_OK)) != std::string(q4dr_status_name(Q4DR_ERR_IO)));
    CHECK(std::strlen(q4dr_status_name(static_cast<q4dr_status>(1234))) > 0);
}

TEST_CASE("instance lifecycle") {
    q4dr_instance* inst = nullptr;
    REQUIRE(q4dr_instance_generate(Q4DR_UC2, 10, 3, nullptr, &inst) == Q4DR_OK);
    REQUIRE(inst != nullptr);
    q4dr_instance_info info{};
    REQUIRE(q4dr_instance_get_info(inst, &info) == Q4DR_OK);
    CHECK(info.use_case == Q4DR_UC2);
    CHECK(info.n == 10);
    CHECK(info.depots == 2);
    CHECK(info.charging == 0);
    CHECK(info.forbidden_arcs > 0);
    CHECK(info.big_m > 1.0);
    CHECK(std::string(q4dr_instance_name(inst)) == "UC2_10");

    const std::string path = (scratch_dir() / "uc2_10.json").string();
    REQUIRE(q4dr_instance_save(inst, path.c_str()) == Q4DR_OK);
    q4dr_instance* back = nullptr;
    REQUIRE(q4dr_instance_load(path.c_str(), &back) == Q4DR_OK);
    q4dr_instance_info info2{};
    q4dr_instance_get_info(back, &info2);
    CHECK(info2.forbidden_arcs == info.forbidden_arcs);
    CHECK(info2.big_m == info.big_m);
    q4dr_instance_free(back);
    q4dr_instance_free(inst);
    q4dr_instance_free(nullptr);
}

TEST_CASE("generation options") {
    q4dr_generate_options opts;
    q4dr_generate_options_default(&opts);
    opts.forbidden_fraction = 0.0;
    q4dr_instance* inst = nullptr;
    REQUIRE(q4dr_instance_generate(Q4DR_UC3, 9, 1, &opts, &inst) == Q4DR_OK);
    q4dr_instance_info info{};
    q4dr_instance_get_info(inst, &info);
    CHECK(info.forbidden_arcs == 0);
    CHECK(info.charging == 3);
    q4dr_instance_free(inst);

    opts.forbidden_fraction = 0.5;
    CHECK(q4dr_instance_generate(Q4DR_UC3, 9, 1, &opts, &inst) == Q4DR_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(q4dr_last_error()) > 0);
}

TEST_CASE("error codes at the boundary") {
    q4dr_instance* inst = nullptr;
    CHECK(q4dr_instance_load("/nonexistent/instance.json", &inst) == Q4DR_ERR_IO);
    CHECK(inst == nullptr);
    CHECK(q4dr_instance_load(nullptr, &inst) == Q4DR_ERR_INVALID_ARGUMENT);
    CHECK(q4dr_instance_generate(Q4DR_UC1, 10, 1, nullptr, nullptr) == Q4DR_ERR_INVALID_ARGUMENT);
    CHECK(q4dr_instance_generate(static_cast<q4dr_use_case>(9), 10, 1, nullptr, &inst) ==
          Q4DR_ERR_INVALID_ARGUMENT);

    const fs::path bad = scratch_dir() / "bad.json";
    {
        std::FILE* f = std::fopen(bad.string().c_str(), "w");
        std::fputs("{\"use_case\": \"UC1\"", f);
        std::fclose(f);
    }
    CHECK(q4dr_instance_load(bad.string().c_str(), &inst) == Q4DR_ERR_SCHEMA);
    CHECK(q4dr_solution_load(bad.string().c_str(), nullptr) == Q4DR_ERR_INVALID_ARGUMENT);

    q4dr_qaoa_config q;
    q4dr_solver_config s;
    fast_configs(&q, &s);
    REQUIRE(q4dr_instance_generate(Q4DR_UC1, 8, 1, nullptr, &inst) == Q4DR_OK);
    q4dr_solution* sol = nullptr;
    s.threads = 0;
    CHECK(q4dr_solve(inst, nullptr, &q, &s, &sol) == Q4DR_ERR_INVALID_ARGUMENT);
    CHECK(sol == nullptr);
    q4dr_instance_free(inst);
}

TEST_CASE("solve, save, reload and verify") {
    q4dr_instance* inst = nullptr;
    REQUIRE(q4dr_instance_generate(Q4DR_UC3, 12, 7, nullptr, &inst) == Q4DR_OK);
    q4dr_qaoa_config q;
    q4dr_solver_config s;
    fast_configs(&q, &s);
    q4dr_solution* sol = nullptr;
    REQUIRE(q4dr_solve(inst, "uc3_12.json", &q, &s, &sol) == Q4DR_OK);

    double sum = 0.0;
    std::size_t visited = 0;
    for (std::size_t r = 0; r < 2; ++r) {
        const std::size_t* seq = nullptr;
        std::size_t len = 0;
        double cost = 0.0;
        REQUIRE(q4dr_solution_route(sol, r, &seq, &len, &cost) == Q4DR_OK);
        CHECK(len >= 3);
        CHECK(seq[len - 1] >= 14);
        sum += cost;
        visited += len - 2;
    }
    CHECK(visited == 12);
    CHECK(q4dr_solution_total_cost(sol) == doctest::Approx(sum));
    CHECK(q4dr_solution_route(sol, 2, nullptr, nullptr, nullptr) == Q4DR_ERR_RANGE);

    std::size_t count = 99;
    REQUIRE(q4dr_solution_verify(sol, inst, &count) == Q4DR_OK);
    CHECK(count == 0);
    CHECK(q4dr_solution_violation(sol, 0) == nullptr);

    const fs::path dir = scratch_dir();
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    REQUIRE(q4dr_solution_save(sol, a.c_str(), 0) == Q4DR_OK);
    REQUIRE(q4dr_solution_save_geojson(sol, (dir / "a.geojson").string().c_str()) == Q4DR_OK);
    CHECK(fs::file_size(dir / "a.geojson") > 0);

    q4dr_solution* loaded = nullptr;
    REQUIRE(q4dr_solution_load(a.c_str(), &loaded) == Q4DR_OK);
    REQUIRE(q4dr_solution_verify(loaded, nullptr, &count) == Q4DR_OK);
    CHECK(count == 0);
    REQUIRE(q4dr_solution_save(loaded, b.c_str(), 0) == Q4DR_OK);
    CHECK(fs::file_size(a) == fs::file_size(b));

    q4dr_instance* embedded = nullptr;
    REQUIRE(q4dr_solution_instance(loaded, &embedded) == Q4DR_OK);
    CHECK(std::string(q4dr_instance_name(embedded)) == "UC3_12");

    q4dr_instance* other = nullptr;
    REQUIRE(q4dr_instance_generate(Q4DR_UC3, 12, 8, nullptr, &other) == Q4DR_OK);
    REQUIRE(q4dr_solution_verify(loaded, other, &count) == Q4DR_OK);
    CHECK(count > 0);
    CHECK(q4dr_solution_violation(loaded, 0) != nullptr);
    CHECK(q4dr_solution_violation(loaded, count) == nullptr);

    q4dr_instance_free(other);
    q4dr_instance_free(embedded);
    q4dr_solution_free(loaded);
    q4dr_solution_free(sol);
    q4dr_instance_free(inst);
}

TEST_CASE("solver kinds") {
    q4dr_instance* inst = nullptr;
    REQUIRE(q4dr_instance_generate(Q4DR_UC2, 10, 2, nullptr, &inst) == Q4DR_OK);
    q4dr_qaoa_config q;
    q4dr_solver_config s;
    fast_configs(&q, &s);
    double exact_cost = 0.0;
    for (auto kind : {Q4DR_SOLVER_EXACT, Q4DR_SOLVER_AUTO, Q4DR_SOLVER_PORTFOLIO, Q4DR_SOLVER_SA}) {
        s.kind = kind;
        q4dr_solution* sol = nullptr;
        REQUIRE(q4dr_solve(inst, nullptr, &q, &s, &sol) == Q4DR_OK);
        const double c = q4dr_solution_total_cost(sol);
        if (kind == Q4DR_SOLVER_EXACT) exact_cost = c;
        else if (kind != Q4DR_SOLVER_SA) CHECK(c == doctest::Approx(exact_cost));
        else CHECK(c >= exact_cost - 1e-6);
        q4dr_solution_free(sol);
    }
    q.shots = 512;
    q.optimizer = Q4DR_OPTIMIZER_NELDER_MEAD;
    q4dr_solution* sol = nullptr;
    CHECK(q4dr_solve(inst, nullptr, &q, &s, &sol) == Q4DR_OK);
    q4dr_solution_free(sol);
    q4dr_instance_free(inst);
}

TEST_CASE("small benchmark run") {
    q4dr_bench_options opts;
    q4dr_bench_options_default(&opts);
    const uint32_t sizes[] = {8};
    opts.sizes = sizes;
    opts.size_count = 1;
    opts.use_case_mask = 0x5;
    q4dr_qaoa_config q;
    q4dr_solver_config s;
    fast_configs(&q, &s);
    q4dr_bench_report* report = nullptr;
    REQUIRE(q4dr_bench_run(&opts, &q, &s, &report) == Q4DR_OK);
    CHECK(q4dr_bench_report_rows(report) == 2);
    CHECK(q4dr_bench_report_failures(report) == 0);
    const std::string csv = q4dr_bench_report_csv(report);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("UC3_8") != std::string::npos);
    CHECK(std::string(q4dr_bench_report_table(report)).find("UC1_8") != std::string::npos);
    q4dr_bench_report_free(report);

    opts.use_case_mask = 0;
    CHECK(q4dr_bench_run(&opts, &q, &s, &report) == Q4DR_ERR_INVALID_ARGUMENT);
}
