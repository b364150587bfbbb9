#include "sphot/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sphot::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // Trim surrounding whitespace and CR.
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("dataset: line " + std::to_string(line_no) +
                                ": cannot parse number '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

Sample read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  Sample sample;
  std::string line;
  std::size_t line_no = 0;
  bool lonlat = false;
  bool first_content = true;
  int d = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    if (first_content) {
      first_content = false;
      if (fields.size() == 2 && fields[0] == "lon" && fields[1] == "lat") {
        lonlat = true;
        continue;
      }
    }
    try {
      if (lonlat) {
        if (fields.size() != 2)
          throw std::invalid_argument("dataset: line " + std::to_string(line_no) +
                                      ": expected lon,lat");
        const double lon = parse_double(fields[0], line_no) * M_PI / 180.0;
        const double lat = parse_double(fields[1], line_no) * M_PI / 180.0;
        sample.push_back(UnitVector({std::cos(lat) * std::cos(lon),
                                     std::cos(lat) * std::sin(lon), std::sin(lat)}));
      } else {
        if (d < 0) d = static_cast<int>(fields.size());
        if (static_cast<int>(fields.size()) != d)
          throw std::invalid_argument("dataset: line " + std::to_string(line_no) +
                                      ": inconsistent column count");
        std::vector<double> coords;
        coords.reserve(fields.size());
        for (const auto& f : fields) coords.push_back(parse_double(f, line_no));
        sample.push_back(UnitVector(std::move(coords)));
      }
    } catch (const std::invalid_argument& err) {
      // Re-wrap UnitVector rejections so they carry the row number.
      std::string msg = err.what();
      if (msg.find("line") == std::string::npos)
        msg = "dataset: line " + std::to_string(line_no) + ": " + msg;
      throw std::invalid_argument(msg);
    }
  }
  if (sample.empty()) throw std::invalid_argument("dataset: no observations in " + path);
  return sample;
}

void write_dataset(const std::string& path, const Sample& sample) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  for (const auto& z : sample) {
    for (int k = 0; k < z.dim(); ++k) {
      if (k) out << ',';
      out << format_double(z[static_cast<std::size_t>(k)]);
    }
    out << '\n';
  }
}

namespace {

ordered_json vector_json(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

ordered_json points_json(const Sample& pts) {
  ordered_json a = ordered_json::array();
  for (const auto& p : pts) a.push_back(vector_json(p.coords()));
  return a;
}

}  // namespace

std::string transport_to_json(const transport::EmpiricalTransport& t) {
  ordered_json j;
  j["n"] = t.size();
  j["d"] = t.dim();
  j["n_R"] = t.grid().n_R();
  j["n_S"] = t.grid().n_S();
  j["n_0"] = t.grid().n_0();
  j["pole"] = vector_json(t.pole().coords());
  j["total_cost"] = t.total_cost();
  j["sample"] = points_json(t.sample());
  ordered_json images = ordered_json::array();
  for (int i = 0; i < t.size(); ++i) images.push_back(vector_json(t.image(i).coords()));
  j["images"] = images;
  j["ranks"] = t.ranks();
  ordered_json signs = ordered_json::array();
  for (const auto& s : t.signs()) signs.push_back(vector_json(s));
  j["signs"] = signs;
  j["grid_index"] = t.grid_index();
  return j.dump(2) + "\n";
}

transport::EmpiricalTransport transport_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  Sample sample;
  for (const auto& row : j.at("sample")) sample.push_back(UnitVector(row.get<std::vector<double>>()));
  UnitVector pole(j.at("pole").get<std::vector<double>>());
  grids::StructuredGrid grid(std::move(pole), j.at("n_R").get<int>(), j.at("n_S").get<int>(),
                             j.at("n_0").get<int>());
  return transport::EmpiricalTransport(std::move(sample), std::move(grid),
                                       j.at("grid_index").get<std::vector<int>>(),
                                       j.at("total_cost").get<double>());
}

std::string gof_report_to_json(const gof::GofReport& rep) {
  ordered_json j;
  j["method"] = rep.method;
  j["statistic"] = rep.statistic;
  j["critical_value"] = rep.critical_value;
  j["p_value"] = rep.p_value;
  j["alpha"] = rep.alpha;
  j["n_mc"] = rep.n_mc;
  j["seed"] = rep.seed;
  j["reject"] = rep.reject;
  return j.dump(2) + "\n";
}

std::string manova_report_to_json(const manova::ManovaReport& rep) {
  ordered_json j;
  j["method"] = rep.method;
  j["score"] = rep.score;
  j["statistic"] = rep.statistic;
  j["df"] = rep.df;
  j["d_star"] = rep.d_star;
  j["p_value"] = rep.p_value;
  j["alpha"] = rep.alpha;
  j["reject"] = rep.reject;
  j["kappa_hat"] = rep.kappa_hat;
  ordered_json delta = ordered_json::array();
  for (const auto& di : rep.delta) delta.push_back(vector_json(di));
  j["delta"] = delta;
  return j.dump(2) + "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sphot::io
