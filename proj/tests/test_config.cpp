#include <cstdlib>

#include "doctest.h"

#include "atomwalk/config.hpp"
#include "atomwalk/error.hpp"
#include "atomwalk/run.hpp"

using namespace atomwalk;

namespace {

struct Failure {
  std::string code;
  std::string message;
};

template <class F>
Failure failure_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  return {"none", ""};
}

bool contains(const std::string& s, std::string_view needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty file keeps the reference defaults") {
    const RunConfig cfg = parse_config("", default_config(Command::Trajectory));
    CHECK(cfg.params.omega_r == 1e-3);
    CHECK(cfg.params.delta == 0.15);
    CHECK(cfg.params.kappa == 0.01);
    CHECK(cfg.initial.x == 0.0);
    CHECK(cfg.initial.p == 10.0);
    CHECK(cfg.initial.u == 0.0);
    CHECK(cfg.initial.v == 0.0);
    CHECK(cfg.initial.z == -1.0);
    CHECK(cfg.integrator.rel_tol == 1e-11);
    CHECK(cfg.integrator.abs_tol == 1e-13);
    CHECK(cfg.effective_t_max() == 1e4);
    CHECK_NOTHROW(cfg.validate());
  }

  TEST_CASE("the shipped example config restates the defaults") {
    for (Command cmd : {Command::Trajectory, Command::Pdf}) {
      const RunConfig d = default_config(cmd);
      const RunConfig c = load_config(std::string(ATOMWALK_SOURCE_DIR) + "/configs/example.ini", d);
      CHECK(config_json(c) == config_json(d));
    }
  }

  TEST_CASE("per-command defaults") {
    CHECK(default_config(Command::Scan).effective_n() == 512);
    CHECK(default_config(Command::Zoom).effective_n() == 2048);
    CHECK(default_config(Command::Pdf).effective_n() == 50000);
    CHECK(default_config(Command::Scan).effective_t_max() == 2e5);
    CHECK(default_config(Command::LyapunovMap).effective_t_max() == 1e4);
    CHECK(default_config(Command::Zoom).effective_lo() == 0.1);
    CHECK(default_config(Command::Zoom).effective_hi() == 0.2);
    CHECK(default_config(Command::Pdf).effective_lo() == 0.05);
    CHECK(default_config(Command::Pdf).effective_hi() == 0.5);
    const ScanSpec s = default_config(Command::Pdf).scan_spec();
    CHECK(s.n == 50000);
    CHECK(s.integrator.t_max == 2e5);
    CHECK(s.hi == 0.5);
  }

  TEST_CASE("every section parses") {
    const char* text = R"(
; comment
[params]
omega_r = 2e-3
delta = -0.25
kappa = 0.02
[initial]
x0 = 0.5
p0 = -3
u0 = 0.6
v0 = 0
z0 = -0.8
[integrator]
rel_tol = 1e-9
abs_tol = 1e-11
max_step = 0.5
invariant_abort_threshold = 1e-5
t_max = 500
[trajectory]
sample_interval = 0.25
stop_on_exit = yes
[lyapunov]
delta_lo = -1
delta_hi = 1
delta_n = 3
kappa_lo = 0
kappa_hi = 0.5
kappa_n = 2
renorm_interval = 2
calibration_runs = 4
reference_delta = 0.9
[scan]
axis = momentum
lo = 5
hi = 15
n = 64
[zoom]
magnification = 10
levels = 2
center = 7
regular_lo = 0.8
regular_hi = 1.2
uncertainty = false
eps_list = 1e-6, 1e-5
[pdf]
linear_bins = 40
log_bins = 30
middle_lo = 100
middle_hi = 900
tail_lo = 1000
tail_hi = 9000
min_tail_count = 3
[run]
workers = 3
out = results
)";
    const RunConfig c = parse_config(text, default_config(Command::Zoom));
    CHECK(c.params.omega_r == 2e-3);
    CHECK(c.params.delta == -0.25);
    CHECK(c.initial.x == 0.5);
    CHECK(c.initial.z == -0.8);
    CHECK(c.integrator.max_step == 0.5);
    CHECK(c.effective_t_max() == 500);
    CHECK(c.trajectory.stop_on_exit);
    CHECK(c.map.delta_axis.n == 3);
    CHECK(c.map.kappa_axis.hi == 0.5);
    CHECK(c.map.calibration_runs == 4);
    CHECK(c.scan.axis == ScanAxis::InitialMomentum);
    CHECK(c.effective_lo() == 5);
    CHECK(c.effective_n() == 64);
    CHECK(c.zoom.center == 7.0);
    CHECK_FALSE(c.zoom.uncertainty);
    CHECK(c.zoom.epsilons == std::vector<double>{1e-6, 1e-5});
    CHECK(c.pdf.tail_window->hi == 9000);
    CHECK(c.pdf.min_tail_count == 3);
    CHECK(c.workers == 3);
    CHECK(c.out_dir == "results");
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("invalid values name the field") {
    const RunConfig c = parse_config("[params]\nomega_r = -1\n", default_config(Command::Trajectory));
    const Failure f = failure_of([&] { c.validate(); });
    CHECK(f.code == "invalid-config");
    CHECK(contains(f.message, "params.omega_r"));

    RunConfig scan = default_config(Command::Scan);
    scan.scan.lo = 0.3;
    const Failure g = failure_of([&] { scan.validate(); });
    CHECK(g.code == "invalid-config");
    CHECK(contains(g.message, "scan.hi"));
  }

  TEST_CASE("parse errors carry source, line and field") {
    const RunConfig base = default_config(Command::Trajectory);
    Failure f = failure_of([&] { parse_config("[params]\ndelta = 0.1\nbogus = 2\n", base, "run.ini"); });
    CHECK(f.code == "config-parse-error");
    CHECK(contains(f.message, "run.ini:3"));
    CHECK(contains(f.message, "params.bogus"));
    CHECK(contains(f.message, "unknown key"));

    f = failure_of([&] { parse_config("\n[nonsense]\nx = 1\n", base, "run.ini"); });
    CHECK(f.code == "config-parse-error");
    CHECK(contains(f.message, "run.ini:2"));
    CHECK(contains(f.message, "unknown section"));

    f = failure_of([&] { parse_config("[params]\nkappa = fast\n", base, "run.ini"); });
    CHECK(f.code == "config-parse-error");
    CHECK(contains(f.message, "run.ini:2"));
    CHECK(contains(f.message, "params.kappa"));

    f = failure_of([&] { parse_config("delta = 0.2\n", base, "run.ini"); });
    CHECK(f.code == "config-parse-error");
    CHECK(contains(f.message, "run.ini:1"));

    CHECK(failure_of([&] { parse_config("[zoom]\nuncertainty = maybe\n", base); }).code == "config-parse-error");
    CHECK(failure_of([&] { parse_config("[run]\nworkers = 0\n", base); }).code == "config-parse-error");
    CHECK(failure_of([&] { parse_config("[scan]\naxis = sideways\n", base); }).code == "config-parse-error");
    CHECK(failure_of([&] { parse_config("[params\n", base); }).code == "config-parse-error");
    CHECK(failure_of([&] { load_config("/nonexistent/atomwalk.ini", base); }).code == "io-error");
    CHECK(failure_of([] { parse_command("walk"); }).code == "config-parse-error");
  }

  TEST_CASE("file values override the base") {
    RunConfig base = default_config(Command::Scan);
    base.params.kappa = 0.05;
    const RunConfig c = parse_config("[params]\ndelta = 0.3\n", base);
    CHECK(c.params.delta == 0.3);
    CHECK(c.params.kappa == 0.05);
    CHECK(c.command == Command::Scan);
  }

  TEST_CASE("worker count from the environment") {
    ::setenv("ATOMWALK_WORKERS", "3", 1);
    CHECK(default_workers() == 3);
    ::setenv("ATOMWALK_WORKERS", "zero", 1);
    CHECK(failure_of([] { default_workers(); }).code == "config-parse-error");
    ::unsetenv("ATOMWALK_WORKERS");
    CHECK(default_workers() >= 1);
  }

  TEST_CASE("double lists") {
    CHECK(parse_double_list(" 1e-7, 2 ,3", "f") == std::vector<double>{1e-7, 2, 3});
    CHECK(failure_of([] { parse_double_list("1,,2", "f"); }).code == "config-parse-error");
    CHECK(failure_of([] { parse_double_list("", "f"); }).code == "config-parse-error");
  }
}
