#include "ite/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#ifndef ITE_VERSION
#define ITE_VERSION "0.0.0"
#endif

namespace ite {

namespace fs = std::filesystem;

const char* version() { return ITE_VERSION; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_digest(const nlohmann::json& doc) {
  const std::string text = doc.dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

// Doubles are stored as 17-digit strings parsed back into numbers, so the
// JSON dump never depends on the library's own float formatting.
nlohmann::json num(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return nlohmann::json::parse(format_double(v));
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  return {{"medium_digest", medium_digest},
          {"medium_name", medium_name},
          {"backend", backend},
          {"alpha", num(alpha)},
          {"lambda_max", num(lambda_max)},
          {"points_per_decade", points_per_decade},
          {"mode_cutoff", mode_cutoff},
          {"tolerances", tolerances},
          {"config", config},
          {"tool_version", tool_version}};
}

std::string ites_csv(const std::vector<IteRecord>& ites) {
  std::ostringstream os;
  os << "lambda,multiplicity,kind,modes\n";
  for (const auto& r : ites) {
    os << format_double(r.lambda) << ',' << r.multiplicity << ',' << r.kind() << ',';
    for (std::size_t i = 0; i < r.contributions.size(); ++i) {
      if (i) os << ';';
      os << r.contributions[i].mode;
    }
    os << '\n';
  }
  return os.str();
}

std::string counting_csv(const CountingReport& rep) {
  std::ostringstream os;
  os << "lambda,N_T,N,N_an,n_minus,n1,n2,R,weyl_prediction,ratio\n";
  for (std::size_t i = 0; i < rep.grid.size(); ++i) {
    const double pred = rep.weyl_prediction(i);
    os << format_double(rep.grid[i]) << ',' << rep.N_T[i] << ',' << rep.N[i] << ',' << rep.N_an[i]
       << ',' << rep.n_minus[i] << ',' << rep.n1[i] << ',' << rep.n2[i] << ',' << rep.R_sing[i] << ','
       << format_double(pred) << ',' << format_double(rep.N_T[i] / pred) << '\n';
  }
  return os.str();
}

std::string events_csv(const std::vector<EigencurveEvent>& events) {
  std::ostringstream os;
  os << "lambda,kind,mode,degeneracy,direction,operator_at_pole,flagged\n";
  for (const auto& e : events) {
    os << format_double(e.lambda) << ',' << to_string(e.kind) << ',' << e.mode << ',' << e.degeneracy
       << ',' << to_string(e.direction) << ',' << to_string(e.pole) << ',' << (e.flagged ? 1 : 0)
       << '\n';
  }
  return os.str();
}

std::string estimates_csv(const EstimateSummary& est) {
  std::ostringstream os;
  os << "lambda,distance,near_pole,c1,c1_mode,c2,c2_mode\n";
  for (const auto& s : est.samples) {
    os << format_double(s.lambda) << ',' << format_double(s.distance) << ',' << (s.near_pole ? 1 : 0)
       << ',' << format_double(s.c1) << ',' << s.c1_mode << ',' << format_double(s.c2) << ','
       << s.c2_mode << '\n';
  }
  return os.str();
}

nlohmann::json weyl_json(const WeylFit& f) {
  return {{"window", {num(f.window_lo), num(f.window_hi)}},
          {"min_ratio", num(f.min_ratio)},
          {"mean_ratio", num(f.mean_ratio)},
          {"slope", num(f.slope)},
          {"n_minus_exponent", num(f.n_minus_exponent)},
          {"exponent_bound", num(f.exponent_bound)},
          {"epsilon", num(f.epsilon)},
          {"bound_satisfied", f.bound_satisfied},
          {"exponent_ok", f.exponent_ok}};
}

nlohmann::json estimates_json(const EstimateSummary& e) {
  nlohmann::json edges = nlohmann::json::array(), m1 = nlohmann::json::array(),
                 m2 = nlohmann::json::array();
  for (double v : e.decade_edges) edges.push_back(num(v));
  for (double v : e.c1_decade_max) m1.push_back(num(v));
  for (double v : e.c2_decade_max) m2.push_back(num(v));
  return {{"c1", num(e.c1)},
          {"c2", num(e.c2)},
          {"decade_edges", edges},
          {"c1_decade_max", m1},
          {"c2_decade_max", m2},
          {"decade_stable", e.decade_stable},
          {"samples", e.samples.size()}};
}

nlohmann::json summary_json(const ReportBundle& b) {
  nlohmann::json s;
  s["manifest"] = b.manifest.to_json();
  nlohmann::json verdicts = nlohmann::json::object();
  if (b.report) {
    const auto& c = b.report->constants;
    s["constants"] = {{"gamma", num(c.gamma)},
                      {"sigma", c.sigma},
                      {"delta", std::to_string(c.delta_numerator) + "/" + std::to_string(c.delta_denominator)},
                      {"weyl_coeff", num(c.weyl_coeff)},
                      {"regime", to_string(c.regime)},
                      {"volume", num(c.volume)}};
    verdicts["nt_inequality"] = b.report->nt_holds();
    verdicts["sandwich"] = b.report->sandwich_holds();
    verdicts["bookkeeping"] = b.report->bookkeeping_holds();
    if (!b.report->grid.empty()) {
      const std::size_t last = b.report->grid.size() - 1;
      s["final"] = {{"lambda", num(b.report->grid[last])},
                    {"N_T", b.report->N_T[last]},
                    {"N", b.report->N[last]},
                    {"N_an", b.report->N_an[last]},
                    {"n_minus", b.report->n_minus[last]},
                    {"n1", b.report->n1[last]},
                    {"n2", b.report->n2[last]},
                    {"R", b.report->R_sing[last]},
                    {"ratio", num(b.report->N_T[last] / b.report->weyl_prediction(last))}};
    }
  }
  if (b.ites) s["ite_count"] = b.ites->size();
  if (b.weyl) {
    s["weyl"] = weyl_json(*b.weyl);
    verdicts["weyl_bound"] = b.weyl->bound_satisfied;
    verdicts["n_minus_exponent"] = b.weyl->exponent_ok;
  }
  if (b.estimates) {
    s["estimates"] = estimates_json(*b.estimates);
    verdicts["estimates_decade_stable"] = b.estimates->decade_stable;
  }
  s["verdicts"] = verdicts;
  s["warnings"] = b.warnings;
  for (auto it = b.extra.begin(); it != b.extra.end(); ++it) s[it.key()] = it.value();
  return s;
}

void write_files(const std::string& out_dir, const std::map<std::string, std::string>& files) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  std::vector<fs::path> temps;
  auto cleanup = [&] {
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [name, content] : files) {
    const fs::path tmp = fs::path(out_dir) / ("." + name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw IoError("cannot write " + tmp.string());
    }
  }
  // Existing files are parked next to their replacement so a failed rename
  // can put every earlier file back.
  std::vector<std::pair<fs::path, fs::path>> placed;  // (destination, parked original or empty)
  auto rollback = [&] {
    for (auto it = placed.rbegin(); it != placed.rend(); ++it) {
      fs::remove(it->first, ec);
      if (!it->second.empty()) fs::rename(it->second, it->first, ec);
    }
  };
  std::size_t i = 0;
  for (const auto& [name, content] : files) {
    const fs::path dst = fs::path(out_dir) / name;
    fs::path parked;
    if (fs::is_regular_file(dst, ec)) {
      parked = fs::path(out_dir) / ("." + name + ".old");
      fs::rename(dst, parked, ec);
      if (ec) parked.clear();
    }
    fs::rename(temps[i], dst, ec);
    if (ec) {
      const std::string msg = "cannot move into place " + dst.string() + ": " + ec.message();
      if (!parked.empty()) fs::rename(parked, dst, ec);
      rollback();
      cleanup();
      throw IoError(msg);
    }
    placed.emplace_back(dst, parked);
    ++i;
  }
  for (const auto& [dst, parked] : placed) {
    if (!parked.empty()) fs::remove(parked, ec);
  }
}

void write_report(const std::string& out_dir, const ReportBundle& b) {
  std::map<std::string, std::string> files;
  if (b.ites) files["ites.csv"] = ites_csv(*b.ites);
  if (b.report) files["counting.csv"] = counting_csv(*b.report);
  if (b.events) files["events.csv"] = events_csv(*b.events);
  if (b.estimates) files["estimates.csv"] = estimates_csv(*b.estimates);
  files["summary.json"] = summary_json(b).dump(2) + "\n";

  nlohmann::json t = nlohmann::json::object();
  for (const auto& [phase, sec] : b.manifest.timings) t[phase] = num(sec);
  files["timings.json"] = t.dump(2) + "\n";
  write_files(out_dir, files);
}

CountingSeries read_counting_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line != "lambda,N_T,N,N_an,n_minus,n1,n2,R,weyl_prediction,ratio") {
    throw IoError(path + ": unexpected header");
  }
  CountingSeries s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw IoError(path + ": malformed row '" + line + "'");
    s.lambda.push_back(std::stod(f[0]));
    s.N_T.push_back(std::stoll(f[1]));
    s.N.push_back(std::stoll(f[2]));
    s.N_an.push_back(std::stoll(f[3]));
    s.n_minus.push_back(std::stoll(f[4]));
    s.n1.push_back(std::stoll(f[5]));
    s.n2.push_back(std::stoll(f[6]));
    s.R.push_back(std::stoll(f[7]));
    s.weyl_prediction.push_back(std::stod(f[8]));
    s.ratio.push_back(std::stod(f[9]));
  }
  return s;
}

}  // namespace ite
