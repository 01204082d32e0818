#include "pfsi/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pfsi {

namespace {

constexpr std::array<char, 16> kMagic = {'P', 'F', 'S', 'I', '-', 'C', 'K', 'P', 'T', '-', 'v', '1', 0, 0, 0, 0};

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t u = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("checkpoint: truncated data");
  std::uint64_t u = 0;
  for (int i = 7; i >= 0; --i) u = (u << 8) | b[i];
  return std::bit_cast<double>(u);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string series_csv(const EnergyReport& r) {
  std::ostringstream os;
  os << "t,E,dissipation,power,residual,mean_eta,sup_eta,periodicity_defect\r\n";
  const std::size_t rows = r.times.size();
  for (std::size_t i = 0; i < rows; ++i) {
    const bool interval = i < r.dissipation.size();
    os << format_double(r.times[i]) << ',' << format_double(r.energy[i]) << ','
       << (interval ? format_double(r.dissipation[i]) : "") << ','
       << (interval ? format_double(r.power[i]) : "") << ','
       << (interval ? format_double(r.residual[i]) : "") << ',' << format_double(r.mean_eta[i]) << ','
       << format_double(r.sup_eta[i]) << ',' << format_double(r.periodicity[i]) << "\r\n";
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  ensure_parent(path);
  const CoefficientTrajectory& t = c.trajectory;
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(kMagic.data(), kMagic.size());
    for (const Eigen::MatrixXd* m : {&t.values, &t.derivatives})
      for (Eigen::Index i = 0; i < m->rows(); ++i)
        for (Eigen::Index j = 0; j < m->cols(); ++j) put_f64(out, (*m)(i, j));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
  }
  nlohmann::json side;
  side["format"] = "pfsi-checkpoint";
  side["version"] = 1;
  side["period"] = t.period;
  side["steps"] = t.steps();
  side["n"] = t.size();
  side["iteration"] = c.iteration;
  side["arrays"] = {{{"name", "values"}, {"shape", {t.steps() + 1, t.size()}}, {"order", "row-major"}},
                    {{"name", "derivatives"}, {"shape", {t.steps() + 1, t.size()}}, {"order", "row-major"}}};
  side["dtype"] = "float64-le";
  side["meta"] = c.meta;
  write_json(path + ".json", side);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream sj(path + ".json");
  if (!sj) throw std::runtime_error("checkpoint: missing sidecar '" + path + ".json'");
  nlohmann::json side;
  try {
    sj >> side;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("checkpoint: bad sidecar: ") + e.what());
  }
  if (side.value("format", "") != "pfsi-checkpoint" || side.value("version", 0) != 1)
    throw std::runtime_error("checkpoint: unsupported sidecar format");

  Checkpoint c;
  const int steps = side.at("steps").get<int>();
  const int n = side.at("n").get<int>();
  c.trajectory = CoefficientTrajectory::zero(side.at("period").get<double>(), steps, n);
  c.iteration = side.value("iteration", 0);
  c.meta = side.value("meta", nlohmann::json::object());

  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
  std::array<char, 16> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("checkpoint: bad magic header");
  for (Eigen::MatrixXd* m : {&c.trajectory.values, &c.trajectory.derivatives})
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = get_f64(in);
  if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error("checkpoint: trailing bytes");
  return c;
}

}  // namespace pfsi
