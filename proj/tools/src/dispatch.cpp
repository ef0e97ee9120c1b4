#include "qtensor/cli/dispatch.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <optional>
#include <ostream>

#include "qtensor/cli/config.hpp"
#include "qtensor/cli/manifest.hpp"
#include "qtensor/errors.hpp"

namespace qtensor::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string exponent_label(double p) { return std::isinf(p) ? "inf" : fmt::format("{:g}", p); }

// Tracks what one invocation wrote so a failure can roll it back.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    if (!fs::exists(dir_)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
  }

  const fs::path& path() const { return dir_; }
  const std::vector<std::string>& written() const { return written_; }

  void write(const std::string& name, const std::string& text) {
    written_.push_back(name);
    std::ofstream f(dir_ / name, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw ValidationError(fmt::format("output: cannot write {}", (dir_ / name).string()));
  }

  void discard() noexcept {
    std::error_code ec;
    for (const auto& name : written_) fs::remove(dir_ / name, ec);
    written_.clear();
    if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }

 private:
  fs::path dir_;
  bool created_dir_ = false;
  std::vector<std::string> written_;
};

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <class Fn>
  auto time(const std::string& stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      StageClock& self;
      std::string stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        self.sink_.push_back(
            {stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
      }
    } record{*this, stage, start};
    return fn();
  }

 private:
  std::vector<StageTiming>& sink_;
};

void print_refinement(std::ostream& out, const RefinementTable& table, const char* level_name) {
  out << fmt::format("{:>10} {:>10} {:>6} {:>10} {:>6} {:>10} {:>6}\n", level_name, "err Q11", "ord", "err Q12",
                     "ord", "err r", "ord");
  auto order = [](double o) { return std::isnan(o) ? std::string("-") : fmt::format("{:.2f}", o); };
  for (const auto& row : table.rows) {
    out << fmt::format("{:>10.3g} {:>10.2e} {:>6} {:>10.2e} {:>6} {:>10.2e} {:>6}\n", row.level, row.error_q11,
                       order(row.order_q11), row.error_q12, order(row.order_q12), row.error_r,
                       order(row.order_r));
  }
  out << fmt::format("mean orders: Q11 {:.2f}  Q12 {:.2f}  r {:.2f}\n", table.mean_order_q11(),
                     table.mean_order_q12(), table.mean_order_r());
}

void print_diagnostics(std::ostream& out, const RunDiagnostics& d) {
  out << fmt::format("runs {}  energy monotone {}  max |residual|/E0 {:.2e}  max CG iterations {}\n", d.runs,
                     d.energy_monotone ? "yes" : "NO", d.max_relative_residual, d.max_cg_iterations);
}

}  // namespace

std::string energy_csv(const std::vector<EnergyRecord>& trace) {
  std::string out = "step,time,E_total,E_kinetic,E_elastic,E_div,E_r,dissipation_residual\n";
  for (const auto& e : trace) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", e.step, num(e.time), num(e.total), num(e.kinetic),
                       num(e.elastic), num(e.divergence), num(e.auxiliary), num(e.dissipation_residual));
  }
  return out;
}

std::string refinement_csv(const RefinementTable& table) {
  std::string out = "level,error_Q11,order_Q11,error_Q12,order_Q12,error_r,order_r\n";
  for (const auto& r : table.rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", num(r.level), num(r.error_q11), num(r.order_q11),
                       num(r.error_q12), num(r.order_q12), num(r.error_r), num(r.order_r));
  }
  return out;
}

std::string sigma_csv(const SigmaStudy& study) {
  std::string out = "sigma,p1,p2,h1_error\n";
  for (const auto& c : study.cases) {
    for (std::size_t k = 0; k < c.sigmas.size(); ++k) {
      out += fmt::format("{},{},{},{}\n", num(c.sigmas[k]), num(c.p1), num(c.p2), num(c.errors[k]));
    }
  }
  out += "# fitted log-log slopes\n# p1,p2,slope\n";
  for (const auto& c : study.cases) out += fmt::format("# {},{},{}\n", num(c.p1), num(c.p2), num(c.slope));
  return out;
}

std::string sigma_case_dat(const SigmaCase& c) {
  std::string out = fmt::format("# p1 = {}, p2 = {}, fitted slope {}\n# sigma h1_error\n", exponent_label(c.p1),
                                exponent_label(c.p2), num(c.slope));
  for (std::size_t k = 0; k < c.sigmas.size(); ++k) out += fmt::format("{} {}\n", num(c.sigmas[k]), num(c.errors[k]));
  return out;
}

std::string sigma_case_filename(const SigmaCase& c) {
  return fmt::format("sigma_p1-{}_p2-{}.dat", exponent_label(c.p1), exponent_label(c.p2));
}

int dispatch(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  std::optional<OutputDir> dir;
  try {
    config.validate();
    dir.emplace(config.output_dir);

    RunManifest manifest;
    manifest.version = version();
    manifest.subcommand = std::string(subcommand_name(config.kind));
    manifest.config = render_config(config);
    StageClock clock(manifest.stages);

    switch (config.kind) {
      case ExperimentKind::run: {
        const RunResult result = clock.time("simulate", [&] { return run_single(config); });
        clock.time("write", [&] { dir->write("energy.csv", energy_csv(result.trace)); });
        const auto& first = result.trace.front();
        const auto& last = result.trace.back();
        out << fmt::format("steps {}..{}  E {:.6g} -> {:.6g}\n", first.step, last.step, first.total, last.total);
        print_diagnostics(out, result.diagnostics);
        break;
      }
      case ExperimentKind::space:
      case ExperimentKind::time: {
        const bool space = config.kind == ExperimentKind::space;
        const RefinementTable table = clock.time("simulate", [&] {
          return space ? space_refinement_study(config) : time_refinement_study(config);
        });
        clock.time("write", [&] {
          dir->write(space ? "space_refinement.csv" : "time_refinement.csv", refinement_csv(table));
        });
        print_refinement(out, table, space ? "h" : "dt");
        print_diagnostics(out, table.diagnostics);
        break;
      }
      case ExperimentKind::sigma: {
        const SigmaStudy study = clock.time("simulate", [&] { return sigma_study(config); });
        clock.time("write", [&] {
          dir->write("sigma_study.csv", sigma_csv(study));
          for (const auto& c : study.cases) dir->write(sigma_case_filename(c), sigma_case_dat(c));
        });
        for (const auto& c : study.cases) {
          out << fmt::format("p1 = {:>4}  p2 = {:>4}  slope {:.2f}\n", exponent_label(c.p1), exponent_label(c.p2),
                             c.slope);
        }
        print_diagnostics(out, study.diagnostics);
        break;
      }
    }

    dir->write("config.ini", manifest.config);
    for (const auto& name : dir->written()) manifest.files.push_back(describe_file(dir->path(), name));
    dir->write("manifest.json", manifest.to_json());
    return kSuccess;
  } catch (const ValidationError& e) {
    if (dir) dir->discard();
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const SolverError& e) {
    if (dir) dir->discard();
    err << "solver failure: " << e.what() << fmt::format(" (iterations {}, residual {:.3e})\n", e.iterations(),
                                                         e.residual());
    return kSolverFailure;
  } catch (const RadicandError& e) {
    if (dir) dir->discard();
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const fs::filesystem_error& e) {
    if (dir) dir->discard();
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace qtensor::cli
