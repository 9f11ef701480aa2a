#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "gbs/cli.hpp"
#include "gbs/errors.hpp"

namespace gbs::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw GeometryError(ErrorKind::ConfigError, what); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vec json_vector(const json& j) {
  if (!j.is_array() || j.empty()) config_error("a vertex must be a non-empty array of numbers");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) config_error("vertex coordinates must be numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<Vec> json_vertices(const json& j) {
  if (!j.is_array() || j.empty()) config_error("vertices must be a non-empty array");
  std::vector<Vec> out;
  for (const auto& v : j) out.push_back(json_vector(v));
  return out;
}

// A list of vertices (one simplex) or a list of such lists.
std::vector<std::vector<Vec>> json_vertex_sets(const json& j) {
  if (!j.is_array() || j.empty()) config_error("vertices must be a non-empty array");
  if (j[0].is_array() && !j[0].empty() && j[0][0].is_array()) {
    std::vector<std::vector<Vec>> out;
    for (const auto& s : j) out.push_back(json_vertices(s));
    return out;
  }
  return {json_vertices(j)};
}

SimplexSpec json_simplex(const json& j) {
  if (!j.is_object()) config_error("simplex entries must be objects");
  SimplexSpec s;
  for (const auto& [key, value] : j.items()) {
    if (key == "id") s.id = value.get<std::string>();
    else if (key == "model") s.model = value.get<std::string>();
    else if (key == "vertices") s.vertices = json_vertices(value);
    else config_error("unknown simplex key '" + key + "'");
  }
  if (s.vertices.empty()) config_error("simplex entry without vertices");
  return s;
}

std::uint64_t json_seed(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(j.get<std::string>(), &used, 0);
      if (used == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  config_error("seed must be a non-negative 64-bit integer");
}

std::string json_chain(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (!j.is_array()) config_error("chain must be a string or an array of terms");
  std::string text;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("id") || !t.contains("vertices")) config_error("chain terms need id and vertices");
    const json coef = t.value("coef", json("1"));
    text += coef.is_string() ? coef.get<std::string>() : coef.dump();
    text += " " + t["id"].get<std::string>();
    for (const auto& l : t["vertices"]) text += " " + (l.is_string() ? l.get<std::string>() : l.dump());
    text += "\n";
  }
  return text;
}

}  // namespace

void apply_config_json(const json& doc, RunConfig& cfg) {
  if (!doc.is_object()) config_error("config must be an object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "model") {
        cfg.model = value.get<std::string>();
      } else if (key == "preset") {
        cfg.preset = value.get<std::string>();
      } else if (key == "vertices_file") {
        cfg.vertices_file = value.get<std::string>();
      } else if (key == "vertices") {
        for (auto& vs : json_vertex_sets(value)) cfg.simplices.push_back({"", "", std::move(vs)});
      } else if (key == "simplices") {
        for (const auto& s : value) cfg.simplices.push_back(json_simplex(s));
      } else if (key == "chain") {
        cfg.chain = json_chain(value);
      } else if (key == "budgets") {
        for (const auto& [bk, bv] : value.items()) {
          if (bk == "simplex_order") cfg.order = bv.get<int>();
          else if (bk == "mc_samples") cfg.mc_samples = bv.get<long>();
          else if (bk == "arc_points") cfg.arc_points = bv.get<int>();
          else if (bk == "generators") cfg.generators = bv.get<std::string>();
          else config_error("unknown budgets key '" + bk + "'");
        }
      } else if (key == "seed") {
        cfg.seed = json_seed(value);
      } else if (key == "tol") {
        cfg.tol = value.get<double>();
      } else if (key == "output") {
        for (const auto& [ok, ov] : value.items()) {
          if (ok == "path") cfg.out = ov.get<std::string>();
          else if (ok == "format") cfg.format = ov.get<std::string>();
          else config_error("unknown output key '" + ok + "'");
        }
      } else if (key == "trials") {
        cfg.trials = value.get<int>();
      } else if (key == "threads") {
        cfg.threads = value.get<unsigned>();
      } else {
        config_error("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    config_error(std::string("config: ") + e.what());
  }
}

std::vector<SimplexSpec> load_vertices_file(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      config_error("vertices file: " + std::string(e.what()));
    }
    std::vector<SimplexSpec> out;
    if (doc.is_array()) {
      for (auto& vs : json_vertex_sets(doc)) out.push_back({"", "", std::move(vs)});
    } else if (doc.contains("simplices")) {
      for (const auto& s : doc["simplices"]) out.push_back(json_simplex(s));
    } else {
      out.push_back(json_simplex(doc));
    }
    return out;
  }
  // Plain text: whitespace-separated coordinates, one vertex per line,
  // blank lines between simplices, '#' comments.
  std::vector<SimplexSpec> out;
  std::vector<Vec> current;
  std::istringstream in(text);
  std::string line;
  auto flush = [&] {
    if (!current.empty()) out.push_back({"", "", std::move(current)});
    current.clear();
  };
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> xs;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        xs.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        config_error("vertices file: bad number '" + tok + "'");
      }
    }
    if (xs.empty()) {
      flush();
      continue;
    }
    current.push_back(Eigen::Map<Vec>(xs.data(), static_cast<int>(xs.size())));
  }
  flush();
  if (out.empty()) config_error("vertices file '" + path + "' has no vertices");
  return out;
}

void resolve_simplices(RunConfig& cfg) {
  std::vector<SimplexSpec> sims;
  if (!cfg.preset.empty()) {
    Preset p = make_preset(cfg.preset);
    sims = std::move(p.simplices);
    if (cfg.chain.empty()) cfg.chain = p.chain;
  }
  if (!cfg.vertices_file.empty())
    for (auto& s : load_vertices_file(cfg.vertices_file)) sims.push_back(std::move(s));
  for (auto& s : cfg.simplices) sims.push_back(std::move(s));
  std::set<std::string> ids;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    auto& s = sims[i];
    if (!cfg.model.empty()) s.model = cfg.model;
    if (s.model.empty()) config_error("no model given for simplex " + std::to_string(i));
    if (s.id.empty()) s.id = "s" + std::to_string(i);
    if (!ids.insert(s.id).second) config_error("duplicate simplex id '" + s.id + "'");
  }
  cfg.simplices = std::move(sims);
}

std::string render(const CommandResult& r, const std::string& format) {
  if (format == "json") return r.report.dump(2) + "\n";
  if (format != "csv") config_error("format must be json or csv");
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + quote(row[i]);
    out += "\n";
  };
  emit(r.csv_header);
  for (const auto& row : r.csv_rows) emit(row);
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) config_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) config_error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) config_error("cannot move report into place: " + ec.message());
}

json payload(const json& report) {
  json p = report;
  if (p.is_object()) p.erase("wall_time");
  return p;
}

}  // namespace gbs::cli
