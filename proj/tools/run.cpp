#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "cone/kernels.hpp"

namespace cone::cli {

namespace {

void apply_thread_cap() {
  const char* env = std::getenv("CONE_DIRAC_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw ValidationError("CONE_DIRAC_THREADS", "expected a positive integer");
  kernels::set_thread_cap(static_cast<int>(n));
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Spectral Dirac evolution on a cone: kernels, decay verification, admissibility"};
  std::string config_path, out_dir = "out", cmd, kind = "dispersive-perp";
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration (defaults when omitted)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--cmd", cmd, "Command")->required()->check(CLI::IsMember({"kernel", "verify", "evolve", "classify"}));
  app.add_option("--kind", kind, "Verification kind")
      ->check(CLI::IsMember({"dispersive-perp", "dispersive-p0-weighted", "dispersive-p0-lq", "counterexample",
                             "classify"}));
  app.add_flag("--quiet", quiet, "Suppress the console summary");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(Exit::Validation);
  }

  try {
    apply_thread_cap();
    const RunConfig c = config_path.empty() ? parse_config({{"schema_version", kSchemaVersion}}) : load_config(config_path);
    validate(c, cmd, kind);
    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    Exit code = Exit::Ok;
    if (cmd == "kernel") code = cmd_kernel(c, out);
    if (cmd == "verify") code = cmd_verify(c, kind, out, quiet);
    if (cmd == "classify") code = cmd_classify(c, out, quiet);
    if (cmd == "evolve") code = cmd_evolve(c, out, quiet);
    return static_cast<int>(code);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return static_cast<int>(Exit::Validation);
  } catch (const AdmissibilityError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return static_cast<int>(Exit::Validation);
  } catch (const RegimeError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return static_cast<int>(Exit::Validation);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(Exit::Failure);
  }
}

}  // namespace cone::cli
