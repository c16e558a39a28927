// Copyright 2026 The daqwear Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <ostream>
#include <thread>

#include "daqwear/analysis.hpp"
#include "daqwear/bridge_client.hpp"
#include "daqwear/bridge_server.hpp"
#include "daqwear/logistics.hpp"
#include "daqwear/simrun.hpp"
#include "daqwear/text.hpp"

namespace daqwear::cli {

namespace {

namespace fs = std::filesystem;

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

WallTime parse_start(const std::string& text) {
  auto t = parse_iso(text);
  if (!t) throw UsageError("bad --start, expected YYYY-MM-DDTHH:MM:SS: " + text);
  return *t;
}

Json call(const Endpoint& endpoint, const Json& request) {
  BridgeClient client(endpoint);
  return client.request(request);
}

int report_failure(const Json& response, std::ostream& err) {
  err << "error: " << response.value("reason", std::string("unknown")) << '\n';
  return kExitPartial;
}

void print_status(const Json& payload, std::ostream& out) {
  for (const char* key : {"state", "watch_id", "files", "clock_ms", "person_id", "session",
                          "battery_pct", "privacy_label"}) {
    const Json& v = payload[key];
    out << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  for (const Json& p : payload.value("progress", Json::array())) {
    out << "  " << p.value("sensor", "") << " @" << p.value("interval_ms", 0) << " ms: "
        << p.value("recorded", 0) << "/" << p.value("expected", 0) << '\n';
  }
}

Scenario load_scenario(const std::string& name, const std::string& file,
                       std::optional<std::uint64_t> seed, bool ideal) {
  Scenario s;
  if (!file.empty()) {
    try {
      s = parse_scenario(read_text(file));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    auto kind = scenario_kind_from_string(name);
    if (!kind) throw UsageError("unknown scenario: " + name);
    s = ideal ? Scenario::ideal(*kind) : Scenario::preset(*kind);
  }
  if (seed) s.seed = *seed;
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Host tool for daqwear virtual watches", "bridgehost"};
  app.require_subcommand(1);
  // Global options may follow the subcommand.
  app.fallthrough();

  std::string endpoint_text;
  app.add_option("--endpoint", endpoint_text, "Bridge endpoint host:port (env DAQWEAR_ENDPOINT)");

  auto* push = app.add_subcommand("push-config", "Upload a config file to the watch");
  std::string config_path;
  push->add_option("file", config_path, "Config file")->required();

  auto* status = app.add_subcommand("status", "Show device status");
  bool status_json = false;
  status->add_flag("--json", status_json, "Print the raw JSON payload");

  auto* restart = app.add_subcommand("restart", "Start a new session for a person");
  int person = 0;
  restart->add_option("--person", person, "Person id 0-999")->required()->check(
      CLI::Range(0, 999));

  auto* clean = app.add_subcommand("clean", "Delete all measurement data on the watch");
  int force = 0;
  clean->add_flag("--force", force, "Repeat three times to confirm");

  auto* pull = app.add_subcommand("pull", "Copy all files into a person/session tree");
  std::string pull_out;
  bool pull_scrub = false;
  pull->add_option("--out", pull_out, "Destination directory")->required();
  pull->add_flag("--scrub", pull_scrub, "Remove private rows while pulling");

  auto* scrub_cmd = app.add_subcommand("scrub", "Remove rows labeled P from a pulled tree");
  std::string scrub_in, scrub_out;
  scrub_cmd->add_option("--in", scrub_in, "Pulled tree")->required()->check(CLI::ExistingDirectory);
  scrub_cmd->add_option("--out", scrub_out, "Output tree")->required();

  auto* density_cmd = app.add_subcommand("density", "Sample density of a file or tree");
  std::string density_path;
  density_cmd->add_option("path", density_path, "Measurement file or directory")
      ->required()
      ->check(CLI::ExistingPath);

  auto* estimate = app.add_subcommand("estimate", "Storage needed for a study");
  double hours = 0, days = 0, row_bytes = 0, hz = 50;
  std::string estimate_config;
  double capacity_mb = 500;
  estimate->add_option("--hours", hours, "Hours per day")->required()->check(
      CLI::Range(0.0, 24.0));
  estimate->add_option("--days", days, "Days")->required()->check(CLI::NonNegativeNumber);
  estimate->add_option("--row-bytes", row_bytes, "Average bytes per row")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* hz_opt = estimate->add_option("--hz", hz, "Rows per second (default 50)")
                     ->check(CLI::PositiveNumber);
  auto* cfg_opt = estimate->add_option("--config", estimate_config,
                                       "Derive rows per second from a config file");
  hz_opt->excludes(cfg_opt);
  estimate->add_option("--capacity-mb", capacity_mb, "Available storage")->check(
      CLI::PositiveNumber);

  auto* sim = app.add_subcommand("sim", "Offline simulation");
  sim->require_subcommand(1);
  auto* sim_run_cmd = sim->add_subcommand("run", "Record one simulated session and pull it");
  std::string scenario_name = "rest", scenario_file, sim_config, sim_out = "sim-out",
              sim_start;
  std::uint64_t seed = 1;
  double duration_s = 60;
  int sim_person = 1;
  bool sim_ideal = false, sim_scrub = false;
  auto* seed_opt = sim_run_cmd->add_option("--seed", seed, "Random seed");
  sim_run_cmd->add_option("--scenario", scenario_name, "rest, spin, walk or climb");
  sim_run_cmd->add_option("--scenario-file", scenario_file, "Scenario key=value file");
  sim_run_cmd->add_option("--duration", duration_s, "Seconds of virtual time")
      ->check(CLI::PositiveNumber);
  sim_run_cmd->add_option("--config", sim_config, "Config file pushed before the session");
  sim_run_cmd->add_option("--out", sim_out, "Output tree");
  sim_run_cmd->add_option("--start", sim_start, "Session wall time, YYYY-MM-DDTHH:MM:SS");
  sim_run_cmd->add_option("--person", sim_person, "Person id")->check(CLI::Range(0, 999));
  sim_run_cmd->add_flag("--ideal", sim_ideal, "No timing bias, jitter or drops");
  sim_run_cmd->add_flag("--scrub", sim_scrub, "Scrub private rows on pull");

  auto* serve = app.add_subcommand("serve", "Run a virtual watch behind the bridge");
  std::string root = "daqwear-device", ui_dir, serve_scenario = "rest", serve_start;
  std::uint16_t port = kDefaultBridgePort, ws_port = kDefaultWebSocketPort;
  bool lan = false;
  double speed = 1.0;
  std::uint64_t serve_seed = 1;
  serve->add_option("--root", root, "Device file system directory");
  serve->add_option("--port", port, "Bridge TCP port");
  serve->add_option("--ws-port", ws_port, "WebSocket and UI port");
  serve->add_option("--ui", ui_dir, "Static UI directory")->check(CLI::ExistingDirectory);
  serve->add_flag("--lan", lan, "Listen on all interfaces instead of loopback");
  serve->add_option("--speed", speed, "Virtual seconds per wall second")->check(
      CLI::PositiveNumber);
  serve->add_option("--scenario", serve_scenario, "rest, spin, walk or climb");
  serve->add_option("--seed", serve_seed, "Random seed");
  serve->add_option("--start", serve_start, "Boot wall time, YYYY-MM-DDTHH:MM:SS");

  auto* gstats_cmd = app.add_subcommand("gstats", "Mean and std of |accel| over fresh samples");
  std::string gstats_path;
  gstats_cmd->add_option("file", gstats_path, "Measurement file")->required()->check(
      CLI::ExistingFile);

  auto* altitude_cmd = app.add_subcommand("altitude", "Height change for a pressure change");
  double delta_p = 0;
  altitude_cmd->add_option("delta_p_hpa", delta_p, "Pressure change in hPa")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  Endpoint endpoint = default_endpoint();
  if (!endpoint_text.empty()) {
    auto ep = parse_endpoint(endpoint_text);
    if (!ep) {
      err << "bad --endpoint: " << endpoint_text << '\n';
      return kExitUsage;
    }
    endpoint = *ep;
  }

  try {
    if (*push) {
      const Json r = call(endpoint, {{"op", "PUSH_CONFIG"}, {"text", read_text(config_path)}});
      if (!r.value("ok", false)) return report_failure(r, err);
      const Json& corrections = r["payload"]["corrections"];
      for (const Json& c : corrections) {
        out << "corrected " << c.value("field", "") << ": '" << c.value("raw", "") << "' -> '"
            << c.value("corrected", "") << "' (" << c.value("reason", "") << ")\n";
      }
      out << "config uploaded, " << corrections.size() << " correction(s)\n";
      return kExitOk;
    }
    if (*status) {
      const Json r = call(endpoint, {{"op", "STATUS"}});
      if (!r.value("ok", false)) return report_failure(r, err);
      if (status_json) {
        out << r["payload"].dump(2) << '\n';
      } else {
        print_status(r["payload"], out);
      }
      return kExitOk;
    }
    if (*restart) {
      const Json r = call(endpoint, {{"op", "SEND"},
                                     {"message", to_json(ControlMessage{RestartMessage{person}})}});
      if (!r.value("ok", false)) return report_failure(r, err);
      print_status(r["payload"], out);
      return kExitOk;
    }
    if (*clean) {
      if (force < 3) {
        err << "clean deletes every file on the watch; confirm with --force three times ("
            << force << "/3 given)\n";
        return kExitUsage;
      }
      const Json r =
          call(endpoint, {{"op", "SEND"}, {"message", to_json(ControlMessage{CleanMessage{}})}});
      if (!r.value("ok", false)) return report_failure(r, err);
      print_status(r["payload"], out);
      return kExitOk;
    }
    if (*pull) {
      BridgeClient client(endpoint);
      PullReport report =
          pull_all([&](const Json& req) { return client.request(req); }, pull_out, pull_scrub);
      for (const PulledFile& f : report.files) {
        out << f.path.string() << " (" << f.bytes << " bytes";
        if (pull_scrub) out << ", " << f.removed_rows << " private rows removed";
        out << ")\n";
      }
      for (const PullFailure& f : report.failures) {
        err << "failed: " << (f.name.empty() ? "<listing>" : f.name) << ": " << f.reason << '\n';
      }
      out << report.files.size() << " file(s) pulled, " << report.failures.size() << " failed\n";
      return report.ok() ? kExitOk : kExitPartial;
    }
    if (*scrub_cmd) {
      ScrubReport report = scrub(scrub_in, scrub_out);
      for (const ScrubFileReport& f : report.files) {
        if (!f.measurement) continue;
        out << f.relative.string() << ": kept " << f.kept << ", removed " << f.removed;
        if (!f.malformed_lines.empty()) out << ", malformed " << f.malformed_lines.size();
        out << '\n';
        for (std::size_t line : f.malformed_lines) {
          err << "warning: " << f.relative.string() << ":" << line << ": malformed row retained\n";
        }
      }
      for (const std::string& e : report.errors) err << "error: " << e << '\n';
      out << "removed " << report.removed() << " private row(s)\n";
      return report.errors.empty() ? kExitOk : kExitPartial;
    }
    if (*density_cmd) {
      DensityReport report = density(density_path);
      for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
      out << format_density(report);
      return report.entries.empty() ? kExitPartial : kExitOk;
    }
    if (*estimate) {
      double bytes = 0;
      if (!estimate_config.empty()) {
        ParsedConfig parsed = parse_config(read_text(estimate_config));
        bytes = estimate_storage(parsed.config, hours, days, row_bytes);
      } else {
        bytes = estimate_storage(hz, hours, days, row_bytes);
      }
      const double mb = bytes / 1e6;
      out << "estimate: " << text::format_fixed(mb, 1) << " MB (" << text::format_fixed(bytes, 0)
          << " bytes)\n";
      out << "fits in " << text::format_shortest(capacity_mb)
          << " MB: " << (mb <= capacity_mb ? "yes" : "no") << '\n';
      return kExitOk;
    }
    if (*sim_run_cmd) {
      SimRunOptions options;
      options.scenario = load_scenario(scenario_name, scenario_file,
                                       seed_opt->count() ? std::optional(seed) : std::nullopt,
                                       sim_ideal);
      options.duration_ms = std::llround(duration_s * 1000.0);
      if (!sim_config.empty()) options.config_text = read_text(sim_config);
      if (!sim_start.empty()) options.start = parse_start(sim_start);
      options.person_id = sim_person;
      options.out_dir = sim_out;
      options.scrub = sim_scrub;
      SimRunResult result = sim_run(options);
      for (const Correction& c : result.corrections.entries) {
        err << "warning: config " << c.field << " corrected (" << to_string(c.reason) << ")\n";
      }
      for (const MeasurementFile& f : result.files) {
        out << f.path.filename().string() << ": " << f.rows_written << " rows, "
            << f.bytes_written << " bytes\n";
      }
      for (const PullFailure& f : result.pull.failures) {
        err << "failed: " << f.name << ": " << f.reason << '\n';
      }
      out << "tree written to " << sim_out << '\n';
      return result.pull.ok() ? kExitOk : kExitPartial;
    }
    if (*serve) {
      auto kind = scenario_kind_from_string(serve_scenario);
      if (!kind) throw UsageError("unknown scenario: " + serve_scenario);
      DeviceOptions device;
      device.root = root;
      device.scenario = Scenario::preset(*kind, serve_seed);
      device.boot_time = serve_start.empty()
                             ? std::chrono::floor<std::chrono::seconds>(
                                   std::chrono::system_clock::now())
                             : parse_start(serve_start);
      DeviceHost host(std::move(device));
      ServeOptions options;
      options.bind_address = lan ? "0.0.0.0" : "127.0.0.1";
      options.tcp_port = port;
      options.ws_port = ws_port;
      if (!ui_dir.empty()) options.ui_dir = fs::path(ui_dir);
      BridgeServer server(host, options);
      host.start_pacing(speed);
      out << "bridge on " << options.bind_address << ":" << server.tcp_port()
          << ", websocket on " << options.bind_address << ":" << server.ws_port() << std::endl;

      g_interrupted = false;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
      host.stop_pacing();
      host.with_device([](Device& d) { d.shutdown(); });
      return kExitOk;
    }
    if (*gstats_cmd) {
      auto stats = gstats(fs::path(gstats_path));
      if (!stats) {
        err << "no fresh accel samples in " << gstats_path << '\n';
        return kExitPartial;
      }
      out << "n=" << stats->count << " mean_G=" << text::format_fixed(stats->mean, 4)
          << " std_G=" << text::format_fixed(stats->stddev, 4) << '\n';
      return kExitOk;
    }
    if (*altitude_cmd) {
      out << text::format_shortest(altitude(delta_p)) << " m\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPartial;
  }
  return kExitUsage;
}

}  // namespace daqwear::cli
