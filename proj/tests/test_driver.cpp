#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "rdg/driver.hpp"

using namespace rdg;

TEST_CASE("run_case: end-to-end smoke with file output") {
    const auto dir = std::filesystem::temp_directory_path() / "rdg_driver_test";
    std::filesystem::remove_all(dir);
    RunConfig config;
    config.problem = "1d-test1";
    config.order = 2;
    config.output_dir = dir.string();
    const RunResult r = run_case(find_problem("1d-test1"), 16, config);
    CHECK(r.steps == 3);
    CHECK(r.error_u > 0.0);
    CHECK(r.error_q > 0.0);
    CHECK(std::filesystem::exists(dir / "1d-test1_k2_n16.dump"));
    CHECK(std::filesystem::exists(dir / "1d-test1_k2_n16_samples.csv"));
    CHECK(std::filesystem::exists(dir / "1d-test1_k2_n16_summary.txt"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("solution dump: round trip preserves the evaluation") {
    const auto path = std::filesystem::temp_directory_path() / "rdg_dump_test.dump";
    const TestCase& tc = find_problem("2d-test1");
    auto mesh = uniform_mesh(2, {5, 5}, tc.lo, tc.hi, {true, true});
    auto space = std::make_shared<RdgSpace>(std::move(mesh), 2);
    const Vec dofs = space->project([&](const Point& x) { return tc.exact(x, 0.0); });
    write_solution_dump(path.string(), *space, dofs, 0.25);
    const LoadedSolution loaded = load_solution_dump(path.string());
    CHECK(loaded.time == doctest::Approx(0.25));
    CHECK(loaded.space->dof_count() == space->dof_count());
    for (const Point p : {Point{0.7, 1.1}, Point{5.0, 2.2}}) {
        CHECK(loaded.space->eval(loaded.dofs, p) ==
              doctest::Approx(space->eval(dofs, p)).epsilon(1e-13));
    }
    // error against itself as a reference is zero
    CHECK(error_vs_reference(*space, dofs, loaded) < 1e-12);
    std::filesystem::remove(path);
}

TEST_CASE("surrogate reference: generated once and reused") {
    const auto dir = std::filesystem::temp_directory_path() / "rdg_ref_test";
    std::filesystem::remove_all(dir);
    RunConfig config;
    config.problem = "1d-test4";
    config.order = 2;
    config.t_final = 0.1;
    config.output_dir = dir.string();
    config.reference_path = "auto";
    const TestCase& tc = find_problem("1d-test4");
    const RunResult r = run_case(tc, 8, config);
    CHECK(r.error_u > 0.0); // measured against the 4x-resolution cache
    CHECK(std::filesystem::exists(dir / "1d-test4_k2_n32_ref.dump"));
    // second run hits the cache and reports the same error
    const RunResult r2 = run_case(tc, 8, config);
    CHECK(r2.error_u == doctest::Approx(r.error_u));
    std::filesystem::remove_all(dir);
}

TEST_CASE("convergence: needs at least two meshes") {
    RunConfig config;
    config.problem = "1d-test1";
    config.cells = {32};
    CHECK_THROWS_AS(convergence_study(config), InvalidArgumentError);
}

TEST_CASE("convergence: rates land near three for the linear case") {
    RunConfig config;
    config.problem = "1d-test1";
    config.order = 2;
    config.cells = {16, 32};
    const auto rows = convergence_study(config);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].rate_u > 2.3);
    const std::string csv = convergence_csv(rows);
    CHECK(csv.find("N,h,error_u,rate_u,error_q,rate_q") == 0);
}

TEST_CASE("wellposedness audit: uniform and graded meshes") {
    RunConfig config;
    config.problem = "1d-test1";
    config.order = 2;
    config.cells = {8};
    const AuditReport uniform = wellposedness_audit(config);
    CHECK(uniform.max_rel_deviation < 1e-12);
    CHECK(uniform.singular_count == 0);
    config.grading = 2.0;
    const AuditReport graded = wellposedness_audit(config);
    CHECK(graded.max_rel_deviation < 1e-10);
    CHECK(graded.all_above_bounds);
}

TEST_CASE("sample range: recovers the extremes of a resolved profile") {
    auto mesh = uniform_mesh(1, {64, 1}, {0, 0}, {2 * 3.14159265358979323846, 0}, {true, false});
    RdgSpace space(std::move(mesh), 2);
    const Vec dofs = space.project([](const Point& x) { return std::sin(x[0]); });
    const RangeReport r = sample_range(space, dofs, 8);
    CHECK(r.max_value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.min_value == doctest::Approx(-1.0).epsilon(1e-3));
}
