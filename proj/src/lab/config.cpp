#include "dlab/lab.hpp"

#include <json.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace dlab {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  double x = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw FormatError("bad number for " + key + ": " + v);
  return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) throw FormatError("bad integer for " + key + ": " + v);
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw FormatError("bad flag for " + key + ": " + v);
}

bool in_unit(double x) { return x >= 0 && x <= 1; }

}  // namespace

void ExperimentConfig::validate() const {
  if (kind != "resilience" && kind != "inheritance" && kind != "load") throw SpecError("unknown experiment " + kind);
  if (host != "complete" && host != "space_barrier" && host != "parity_barrier" && host != "random")
    throw SpecError("unknown host " + host);
  if (!(in_unit(p) && in_unit(gamma) && in_unit(rho) && in_unit(lambda) && in_unit(eta)))
    throw SpecError("probabilities and fractions must lie in [0, 1]");
  if (trials < 1) throw SpecError("trials must be at least 1");
  if (k < 2 || k > n) throw SpecError("need 2 <= k <= n");
  if (d < 1 || d >= k) throw SpecError("need 1 <= d < k");
  if (kind == "inheritance" && (q < k || q > n) && rho == 0) throw SpecError("need k <= q <= n");
}

ExperimentConfig read_config(std::istream& in) {
  ExperimentConfig c;
  for (const auto& [key, v] : read_key_values(in)) {
    if (key == "name") c.name = v;
    else if (key == "kind") c.kind = v;
    else if (key == "n") c.n = parse_uint(key, v);
    else if (key == "k") c.k = parse_uint(key, v);
    else if (key == "d") c.d = parse_uint(key, v);
    else if (key == "p") c.p = parse_double(key, v);
    else if (key == "gamma") c.gamma = parse_double(key, v);
    else if (key == "q") c.q = parse_uint(key, v);
    else if (key == "rho") c.rho = parse_double(key, v);
    else if (key == "lambda") c.lambda = parse_double(key, v);
    else if (key == "eta") c.eta = parse_double(key, v);
    else if (key == "trials") c.trials = parse_uint(key, v);
    else if (key == "master_seed") c.master_seed = parse_uint(key, v);
    else if (key == "output") c.output = v;
    else if (key == "policy") c.policy = parse_policy(v);
    else if (key == "p_hat") {
      if (v != "nominal" && v != "empirical") throw FormatError("p_hat must be nominal or empirical");
      c.empirical_p = v == "empirical";
    } else if (key == "host") c.host = v;
    else if (key == "exhaustive") c.exhaustive = parse_bool(key, v);
    else if (key == "budget") c.budget = parse_uint(key, v);
    else if (key == "threads") c.threads = static_cast<unsigned>(parse_uint(key, v));
    else throw FormatError("unknown config key " + key);
  }
  return c;
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
  out << "name = " << c.name << "\nkind = " << c.kind << "\nn = " << c.n << "\nk = " << c.k << "\nd = " << c.d
      << "\np = " << format_double(c.p) << "\ngamma = " << format_double(c.gamma) << "\nq = " << c.q
      << "\nrho = " << format_double(c.rho) << "\nlambda = " << format_double(c.lambda)
      << "\neta = " << format_double(c.eta) << "\ntrials = " << c.trials << "\nmaster_seed = " << c.master_seed
      << "\npolicy = " << to_string(c.policy) << "\np_hat = " << (c.empirical_p ? "empirical" : "nominal")
      << "\nhost = " << c.host << "\nexhaustive = " << (c.exhaustive ? "true" : "false") << "\nbudget = " << c.budget
      << "\nthreads = " << c.threads << '\n';
  if (!c.output.empty()) out << "output = " << c.output << '\n';
}

// ---------------------------------------------------------------------------

const std::string& CsvTable::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw FormatError("no summary field " + key);
}

void write_csv(std::ostream& out, const CsvTable& t) {
  auto row = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  };
  out << "#dlab-csv v" << kCsvVersion << ' ' << t.kind << '\n';
  for (const auto& [k, v] : t.meta) out << "#meta " << k << '=' << v << '\n';
  row(t.columns);
  for (const auto& r : t.rows) row(r);
  for (const auto& [k, v] : t.summary) out << "#summary " << k << '=' << v << '\n';
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("#dlab-csv ", 0) != 0) throw FormatError("missing #dlab-csv version line");
  std::istringstream head(line.substr(10));
  std::string version;
  head >> version >> t.kind;
  if (version != "v" + std::to_string(kCsvVersion)) throw FormatError("unsupported CSV version " + version);
  if (t.kind.empty()) throw FormatError("CSV version line names no kind");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  auto kv = [](const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw FormatError("bad key=value comment: " + s);
    return std::make_pair(s.substr(0, eq), s.substr(eq + 1));
  };
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("#meta ", 0) == 0) {
      t.meta.push_back(kv(line.substr(6)));
    } else if (line.rfind("#summary ", 0) == 0) {
      t.summary.push_back(kv(line.substr(9)));
    } else if (line[0] == '#') {
      continue;
    } else if (!header) {
      t.columns = split(line);
      header = true;
    } else {
      auto r = split(line);
      if (r.size() != t.columns.size()) throw FormatError("ragged CSV row: " + line);
      t.rows.push_back(std::move(r));
    }
  }
  if (!header) throw FormatError("CSV without header row");
  return t;
}

std::string table_to_json(const CsvTable& t) {
  nlohmann::json j;
  j["format"] = "dlab-csv";
  j["version"] = kCsvVersion;
  j["kind"] = t.kind;
  j["meta"] = nlohmann::json::object();
  for (const auto& [k, v] : t.meta) j["meta"][k] = v;
  j["summary"] = nlohmann::json::object();
  for (const auto& [k, v] : t.summary) j["summary"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j.dump(2);
}

}  // namespace dlab
