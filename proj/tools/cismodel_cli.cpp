// cismodel: validate and evaluate image-sensor design documents.
//
// Exit codes: 0 ok, 1 check violations or stalls, 2 parse/schema/model
// error, 3 digital latency alone exceeds the frame time.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cismodel/design_io.hpp"
#include "cismodel/error.hpp"
#include "cismodel/oracle.hpp"
#include "cismodel/report.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kViolations = 1, kInvalid = 2, kTooSlow = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cis::ModelError(cis::ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double parse_fps(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  const double v = cis::parse_quantity(text, cis::Unit::Hertz);
  if (!(v > 0.0)) throw cis::ModelError(cis::ErrorKind::InvalidArgument, "fps must be positive");
  return v;
}

std::vector<std::string> expand(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".design") found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

int cmd_check(const std::string& file, cis::Format format) {
  const cis::Design d = cis::load_design(read_file(file));
  const cis::CheckReport checks = cis::run_checks(d);
  std::vector<cis::StallCause> stalls;
  if (checks.passed()) stalls = cis::simulate_digital(d.graph, d.hardware, d.mapping).stalls;
  std::cout << cis::emit_checks(checks, stalls, format);
  return checks.passed() && stalls.empty() ? kOk : kViolations;
}

int cmd_run(const std::string& file, double fps, cis::Format format, bool verify) {
  const cis::Design d = cis::load_design(read_file(file));
  cis::EnergyReport r = cis::run(d, fps);
  if (r.design.empty()) r.design = fs::path(file).stem().string();
  std::cout << cis::emit(r, format);
  int code = r.status == "ok" ? kOk : kViolations;
  if (verify && r.checks.passed()) {
    try {
      const auto mismatches = cis::cross_check(d);
      for (const auto& m : mismatches) std::cerr << "verify: mismatch: " << m << "\n";
      if (mismatches.empty()) {
        std::cerr << "verify: analytical counts match the oracle\n";
      } else {
        code = kViolations;
      }
    } catch (const cis::ModelError& e) {
      std::cerr << "verify: skipped (" << e.what() << ")\n";
    }
  }
  return code;
}

int cmd_sweep(const std::vector<std::string>& inputs, double fps, cis::Format format) {
  std::vector<std::pair<std::string, std::string>> docs;
  for (const auto& f : expand(inputs)) docs.emplace_back(fs::path(f).stem().string(), read_file(f));
  if (docs.empty()) throw cis::ModelError(cis::ErrorKind::InvalidArgument, "no .design files found");
  const cis::SweepResult result = cis::sweep(docs, fps);
  std::cout << cis::emit(result, format);
  bool all_ok = true;
  for (const auto& e : result.entries) all_ok = all_ok && e.report && e.report->status == "ok";
  return all_ok ? kOk : kViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Component-level energy model for computational image sensors"};
  app.require_subcommand(1);

  std::string file, fps_text, format_text = "table";
  std::vector<std::string> inputs;
  bool verify = false;
  const std::vector<std::string> formats = {"table", "csv", "json"};

  auto* check = app.add_subcommand("check", "validate a design without computing energy");
  check->add_option("file", file, "design document")->required();
  check->add_option("--format", format_text, "table, csv or json")->check(CLI::IsMember(formats));

  auto* run = app.add_subcommand("run", "per-frame energy report for one design");
  run->add_option("file", file, "design document")->required();
  run->add_option("--fps", fps_text, "target frame rate in Hz")->required();
  run->add_option("--format", format_text, "table, csv or json")->check(CLI::IsMember(formats));
  run->add_flag("--verify", verify, "cross-check counts against the brute-force oracle");

  auto* sweep = app.add_subcommand("sweep", "compare several designs");
  sweep->add_option("inputs", inputs, "design files or directories")->required();
  sweep->add_option("--fps", fps_text, "target frame rate in Hz")->required();
  sweep->add_option("--format", format_text, "table, csv or json")->check(CLI::IsMember(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    const cis::Format format = cis::format_from_string(format_text);
    if (check->parsed()) return cmd_check(file, format);
    if (run->parsed()) return cmd_run(file, parse_fps(fps_text), format, verify);
    return cmd_sweep(inputs, parse_fps(fps_text), format);
  } catch (const cis::DigitalTooSlowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTooSlow;
  } catch (const cis::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
