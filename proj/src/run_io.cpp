#include "trb/run_io.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace trb {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_iterates_csv(std::ostream& out, const RunResult& run) {
  out << "j,i,f,decrease_ratio,gap,bundle_size,delta,dist_to_xstar,accepted\n";
  for (const auto& r : run.trace) {
    out << r.j << ',' << r.i << ',' << format_double(r.f) << ',' << format_double(r.decrease_ratio)
        << ',' << format_double(r.gap) << ',' << r.bundle_size << ',' << format_double(r.delta)
        << ',' << (r.dist_to_xstar ? format_double(*r.dist_to_xstar) : std::string()) << ','
        << (r.accepted ? 1 : 0) << '\n';
  }
}

void write_handoff(std::ostream& out, const RunResult& run) {
  for (const auto& h : run.handoff) {
    out << h.j << ' ' << format_double(h.delta) << ' ' << format_double(h.f);
    for (Eigen::Index k = 0; k < h.x.size(); ++k) out << ' ' << format_double(h.x(k));
    out << '\n';
  }
}

namespace {

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

Vector vec_from(const json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t k = 0; k < a.size(); ++k) v(static_cast<Eigen::Index>(k)) = a[k].get<double>();
  return v;
}

const char* tau_name(TauSchedule s) {
  switch (s) {
    case TauSchedule::Constant: return "constant";
    case TauSchedule::Vanishing: return "vanishing";
    case TauSchedule::Explicit: return "explicit";
  }
  return "?";
}

TauSchedule tau_from(const std::string& s) {
  if (s == "constant") return TauSchedule::Constant;
  if (s == "vanishing") return TauSchedule::Vanishing;
  if (s == "explicit") return TauSchedule::Explicit;
  throw Error("manifest: unknown tau schedule '" + s + "'");
}

json config_json(const RunConfig& c) {
  return json{{"p", c.p},
              {"q", c.q},
              {"delta0", c.delta0},
              {"delta_ratio", c.delta_ratio},
              {"deltas", c.deltas},
              {"tau_schedule", tau_name(c.tau_schedule)},
              {"tau", c.tau},
              {"tau_ratio", c.tau_ratio},
              {"taus", c.taus},
              {"sigma", c.sigma},
              {"cap", c.cap},
              {"j_max", c.j_max},
              {"max_inner", c.max_inner},
              {"max_builder_iter", c.max_builder_iter},
              {"memory_capacity", c.memory_capacity},
              {"seed", c.seed},
              {"x0", vec_json(c.x0)},
              {"remainder_constant", c.remainder_constant}};
}

}  // namespace

std::string manifest_json(const RunConfig& config, const ManifestInfo& info, const RunResult& run,
                          const std::vector<EnclosureLevel>& enclosure) {
  json levels = json::array();
  for (const auto& l : run.levels) {
    levels.push_back({{"j", l.j},
                      {"delta", l.delta},
                      {"tau", l.tau},
                      {"f", l.f},
                      {"steps", l.steps},
                      {"decrease_ratio", l.decrease_ratio},
                      {"gap", l.gap},
                      {"lambda_bound", l.lambda_bound}});
  }
  json encl = json::array();
  for (const auto& e : enclosure) {
    encl.push_back({{"j", e.j},
                    {"delta", e.delta},
                    {"distance", e.distance},
                    {"euclidean_distance", e.euclidean_distance},
                    {"enclosed", e.enclosed}});
  }
  json m{{"version", kVersion},
         {"config", config_json(config)},
         {"instance", {{"path", info.instance_path}, {"family", info.family}, {"seed", info.instance_seed}}},
         {"summary",
          {{"status", info.status},
           {"final_f", run.final_value},
           {"final_point", run.final_point.size() ? vec_json(run.final_point) : json::array()},
           {"oracle_calls", run.oracle_calls},
           {"fallback_solves", run.fallback_solves},
           {"max_feasibility_violation", run.max_feasibility_violation},
           {"levels", levels},
           {"enclosure", encl},
           {"wall_seconds", info.wall_seconds}}}};
  return m.dump(2) + "\n";
}

ManifestConfig read_manifest(const std::string& text) {
  json m;
  try {
    m = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
  try {
    const json& c = m.at("config");
    ManifestConfig out;
    RunConfig& r = out.config;
    r.p = c.at("p").get<int>();
    r.q = c.at("q").get<int>();
    r.delta0 = c.at("delta0").get<double>();
    r.delta_ratio = c.at("delta_ratio").get<double>();
    r.deltas = c.at("deltas").get<std::vector<double>>();
    r.tau_schedule = tau_from(c.at("tau_schedule").get<std::string>());
    r.tau = c.at("tau").get<double>();
    r.tau_ratio = c.at("tau_ratio").get<double>();
    r.taus = c.at("taus").get<std::vector<double>>();
    r.sigma = c.at("sigma").get<double>();
    r.cap = c.at("cap").get<double>();
    r.j_max = c.at("j_max").get<int>();
    r.max_inner = c.at("max_inner").get<int>();
    r.max_builder_iter = c.at("max_builder_iter").get<int>();
    r.memory_capacity = c.at("memory_capacity").get<std::size_t>();
    r.seed = c.at("seed").get<std::uint64_t>();
    r.x0 = vec_from(c.at("x0"));
    r.remainder_constant = c.at("remainder_constant").get<double>();
    out.instance_path = m.at("instance").at("path").get<std::string>();
    return out;
  } catch (const json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
}

void write_plotdata(std::ostream& out, const Oracle& oracle, double lo, double hi, int count) {
  if (oracle.dim() != 1) throw Error("write_plotdata: needs a one-dimensional instance");
  if (count < 2 || !(hi > lo)) throw Error("write_plotdata: bad range");
  out << "x,f\n";
  Point x(1);
  for (int k = 0; k < count; ++k) {
    x(0) = lo + (hi - lo) * k / (count - 1);
    out << format_double(x(0)) << ',' << format_double(oracle.value(x)) << '\n';
  }
}

void write_plot_script(std::ostream& out, const std::string& csv_name, const std::string& title) {
  out << "set datafile separator ','\n"
      << "set key off\n"
      << "set title '" << title << "'\n"
      << "set xlabel 'x'\nset ylabel 'f(x)'\n"
      << "plot '" << csv_name << "' using 1:2 every ::1 with lines\n";
}

}  // namespace trb
