#include "plfu/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "plfu/bench.hpp"
#include "plfu/metrics.hpp"
#include "plfu/workload.hpp"

namespace plfu::cli {

namespace {

struct CapacityArgs {
  std::optional<double> rate;
  std::optional<std::size_t> capacity;
};

struct SimulationArgs {
  std::string trace;
  std::string policy;
  CapacityArgs size;
  std::string hotset_file;
};

void add_simulation_flags(CLI::App* cmd, SimulationArgs& args) {
  cmd->add_option("--trace", args.trace, "Trace file, one object id per line")->required();
  cmd->add_option("--policy", args.policy, "lfu, plfu or plfua")->required();
  auto* rate = cmd->add_option("--rate", args.size.rate,
                               "Cache size as a fraction of the trace's distinct objects");
  auto* cap = cmd->add_option("--capacity", args.size.capacity, "Cache size in objects");
  rate->excludes(cap);
  cmd->add_option("--hotset-file", args.hotset_file,
                  "PLFUA admission set (ids separated by newlines); default: 2C most requested");
}

std::size_t resolve_capacity(const CapacityArgs& size, const Trace& trace) {
  if (size.rate.has_value() == size.capacity.has_value()) {
    throw Error(ErrorKind::InvalidParameter, "exactly one of --rate or --capacity is required");
  }
  if (size.capacity) {
    if (*size.capacity < 1) throw Error(ErrorKind::InvalidParameter, "--capacity must be >= 1");
    return *size.capacity;
  }
  if (!(*size.rate > 0.0 && *size.rate <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "--rate must lie in (0, 1]");
  }
  return capacity_for(distinct_objects(trace.requests), *size.rate);
}

CacheConfig build_config(Policy policy, std::size_t capacity, const Trace& trace,
                         const std::string& hotset_file) {
  CacheConfig config{capacity, policy, std::nullopt};
  if (policy == Policy::PLFUA) {
    config.hot_set = hotset_file.empty() ? hot_set(trace, capacity) : read_hot_set_file(hotset_file);
  } else if (!hotset_file.empty()) {
    throw Error(ErrorKind::InvalidParameter, "--hotset-file only applies to --policy plfua");
  }
  return config;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  return out;
}

std::vector<Policy> parse_policy_list(const std::string& text) {
  std::vector<Policy> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(parse_policy(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw Error(ErrorKind::InvalidParameter, "--policies is empty");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace-driven LFU / PLFU / PLFUA cache management simulator", "plfu-sim"};
  app.require_subcommand(1);

  // generate
  ZipfSpec gen_spec{0, 1.1, 100'000, 0};
  long long gen_n = 0;
  long long gen_requests = 100'000;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a seeded Zipf request trace");
  gen->add_option("--n", gen_n, "Number of distinct objects")->required();
  gen->add_option("--alpha", gen_spec.alpha, "Zipf exponent")->capture_default_str();
  gen->add_option("--requests", gen_requests, "Trace length")->capture_default_str();
  gen->add_option("--seed", gen_spec.seed, "PRNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output trace file")->required();

  // ingest
  std::string sessions_path, ingest_out;
  std::int64_t min_duration = kDefaultMinSessionSeconds;
  std::optional<std::int64_t> window_start, window_end;
  auto* ingest = app.add_subcommand("ingest", "Convert a viewing-session CSV into a trace");
  ingest->add_option("--sessions", sessions_path, "CSV with header start,end,content_id")->required();
  ingest->add_option("--min-duration", min_duration, "Minimum session length in seconds")
      ->capture_default_str();
  ingest->add_option("--window-start", window_start, "Observation window start (epoch s)");
  ingest->add_option("--window-end", window_end, "Observation window end, exclusive (epoch s)");
  ingest->add_option("--out", ingest_out, "Output trace file")->required();

  // run
  SimulationArgs run_args;
  std::string report_path, events_path;
  auto* run_cmd = app.add_subcommand("run", "Replay a trace and emit a run report");
  add_simulation_flags(run_cmd, run_args);
  run_cmd->add_option("--report", report_path, "Report JSON path (default: stdout)");
  run_cmd->add_option("--events", events_path, "Optional per-request event CSV");

  // scatter
  SimulationArgs scatter_args;
  std::string scatter_out;
  auto* scatter_cmd = app.add_subcommand("scatter", "Export rank-order hit/miss scatter data");
  add_simulation_flags(scatter_cmd, scatter_args);
  scatter_cmd->add_option("--out", scatter_out, "Scatter CSV path")->required();

  // sweep
  std::string config_path, outdir, policies_text;
  std::optional<std::size_t> max_n, samples, requests;
  std::optional<std::uint64_t> base_seed;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run the object-count x cache-rate benchmark grid");
  sweep->add_option("--config", config_path, "Sweep config JSON (default: built-in 60-case grid)");
  sweep->add_option("--outdir", outdir, "Directory for grid CSVs and manifest")->required();
  sweep->add_option("--policies", policies_text, "Comma-separated subset of lfu,plfu,plfua");
  sweep->add_option("--max-n", max_n, "Drop object counts above this value");
  sweep->add_option("--samples", samples, "Samples per case");
  sweep->add_option("--requests", requests, "Requests per sample");
  sweep->add_option("--base-seed", base_seed, "Base seed for per-case seed derivation");
  sweep->add_option("--jobs", jobs, "Cases run concurrently (1 = sequential timing)")
      ->capture_default_str();

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("plfu-sim");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (gen->parsed()) {
      if (gen_n < 1) throw Error(ErrorKind::InvalidParameter, "--n must be >= 1");
      if (gen_requests < 1) throw Error(ErrorKind::InvalidParameter, "--requests must be >= 1");
      gen_spec.n_objects = static_cast<std::size_t>(gen_n);
      gen_spec.n_requests = static_cast<std::size_t>(gen_requests);
      validate(gen_spec);
      const Trace trace = generate(gen_spec);
      write_trace_file(gen_out, trace);
      out << "generated " << trace.size() << " requests: Zipf(alpha=" << gen_spec.alpha
          << ") over " << gen_spec.n_objects << " objects, seed " << gen_spec.seed << " -> "
          << gen_out << '\n';
    } else if (ingest->parsed()) {
      if (window_start.has_value() != window_end.has_value()) {
        throw Error(ErrorKind::InvalidParameter,
                    "--window-start and --window-end must be given together");
      }
      if (min_duration < 0) throw Error(ErrorKind::InvalidParameter, "--min-duration must be >= 0");
      std::optional<TimeWindow> window;
      if (window_start) window = TimeWindow{*window_start, *window_end};
      const auto records = read_sessions_csv_file(sessions_path);
      const Trace trace = ingest_sessions(records, min_duration, window, sessions_path);
      write_trace_file(ingest_out, trace);
      out << "ingested " << trace.size() << " of " << records.size() << " sessions ("
          << distinct_objects(trace.requests) << " distinct objects) -> " << ingest_out << '\n';
    } else if (run_cmd->parsed()) {
      const Policy policy = parse_policy(run_args.policy);
      const Trace trace = read_trace_file(run_args.trace);
      const std::size_t capacity = resolve_capacity(run_args.size, trace);
      const auto config = build_config(policy, capacity, trace, run_args.hotset_file);
      const auto result = replay(config, trace.requests);
      const RunReport report = summarize(result.events, result.peaks,
                                         {result.report.final_resident, result.report.final_parked});
      if (report_path.empty()) {
        out << to_json(report) << '\n';
      } else {
        auto file = open_output(report_path);
        file << to_json(report) << '\n';
        out << to_string(policy) << " capacity " << capacity << ": chr " << report.chr << " ("
            << report.hits << " hits, " << report.misses << " misses) -> " << report_path << '\n';
      }
      if (!events_path.empty()) {
        auto file = open_output(events_path);
        write_events_csv(file, result.events);
      }
    } else if (scatter_cmd->parsed()) {
      const Policy policy = parse_policy(scatter_args.policy);
      const Trace trace = read_trace_file(scatter_args.trace);
      std::vector<ScatterPoint> points;
      if (!trace.requests.empty()) {
        const std::size_t capacity = resolve_capacity(scatter_args.size, trace);
        const auto config = build_config(policy, capacity, trace, scatter_args.hotset_file);
        const auto result = replay(config, trace.requests);
        points = scatter(result.events, popularity_ranks(trace));
      } else if (scatter_args.size.rate.has_value() == scatter_args.size.capacity.has_value()) {
        throw Error(ErrorKind::InvalidParameter, "exactly one of --rate or --capacity is required");
      }
      auto file = open_output(scatter_out);
      write_scatter_csv(file, points);
      out << "wrote " << points.size() << " scatter points -> " << scatter_out << '\n';
    } else if (sweep->parsed()) {
      SweepConfig config = default_grid();
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorKind::Io, "cannot open sweep config '" + config_path + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        config = config_from_json(text);
      }
      if (!policies_text.empty()) config.policies = parse_policy_list(policies_text);
      if (max_n) {
        std::erase_if(config.object_counts, [&](std::size_t n) { return n > *max_n; });
      }
      if (samples) config.samples_per_case = *samples;
      if (requests) config.requests_per_sample = *requests;
      if (base_seed) config.base_seed = *base_seed;
      validate(config);

      SweepOptions options;
      options.jobs = jobs;
      options.on_cell = [&](const CellResult& cell) {
        err << "  N=" << cell.n_objects << " rate=" << cell.rate << " C=" << cell.capacity
            << " done\n";
      };
      const auto result = run_sweep(config, options);
      const auto files = write_sweep_outputs(result, outdir, jobs);
      out << "sweep: " << config.object_counts.size() * config.rates.size() << " cases x "
          << config.policies.size() << " policies x " << config.samples_per_case
          << " samples; wrote " << files.size() << " files to " << outdir << '\n';
      if (result.runs_below_resolution > 0) {
        err << "warning: " << result.runs_below_resolution
            << " timed runs were shorter than 1000x the clock resolution\n";
      }
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace plfu::cli
