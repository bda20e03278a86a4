#include "papal/ensemble.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace papal {

namespace {

constexpr char kMagic[8] = {'P', 'A', 'P', 'A', 'L', 'E', 'N', '1'};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

EnsembleSnapshot freeze(const ParticleEnsemble& ensemble) {
  return std::make_shared<const ParticleEnsemble>(ensemble);
}

EnsembleSnapshot freeze(ParticleEnsemble&& ensemble) {
  return std::make_shared<const ParticleEnsemble>(std::move(ensemble));
}

ParticleEnsemble sample_prior(int dim, Eigen::Index count, double lambda1, double lambda2,
                              const StreamKey& key) {
  if (dim < 1) throw InvalidArgument("prior dimension must be >= 1");
  if (count < 1) throw InvalidArgument("particle count must be >= 1");
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw InvalidArgument("lambda1 and lambda2 must be positive");
  }
  const double sd = std::sqrt(lambda2 / (2.0 * lambda1));
  ParticleEnsemble out;
  out.generation = key.generation;
  out.positions.resize(count, dim);
  for (Eigen::Index r = 0; r < count; ++r) {
    ParticleRng rng(key.stream(static_cast<std::uint64_t>(r)));
    for (int i = 0; i < dim; ++i) out.positions(r, i) = sd * rng.normal();
  }
  return out;
}

PayoffAverage empirical_payoff_grad(const ParticleEnsemble& atoms, const PayoffOracle& oracle,
                                    Point point, Player atoms_player) {
  const int qdim = oracle.dim(opponent(atoms_player));
  if (atoms.dim() != oracle.dim(atoms_player)) {
    throw DimensionMismatch("snapshot dimension does not match the payoff");
  }
  if (static_cast<int>(point.size()) != qdim) {
    throw DimensionMismatch("query point dimension does not match the payoff");
  }
  if (atoms.count() == 0) throw InvalidArgument("empty snapshot");
  Matrix query(1, qdim);
  std::copy(point.begin(), point.end(), query.data());
  Vector values;
  Matrix grads;
  oracle.average_against(atoms_player, atoms.positions, query, values, grads);
  return {values[0], grads.row(0).transpose()};
}

void write_csv(const ParticleEnsemble& ensemble, std::ostream& out) {
  out << "generation=" << ensemble.generation << '\n';
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < ensemble.count(); ++r) {
    for (int i = 0; i < ensemble.dim(); ++i) {
      if (i) out << ',';
      out << ensemble.positions(r, i);
    }
    out << '\n';
  }
}

ParticleEnsemble read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("generation=", 0) != 0) {
    throw InvalidArgument("ensemble csv: missing generation header");
  }
  ParticleEnsemble out;
  out.generation = std::stoull(line.substr(11));
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Eigen::Index n = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++n;
    }
    if (cols >= 0 && n != cols) throw InvalidArgument("ensemble csv: ragged rows");
    cols = n;
    ++rows;
  }
  if (rows == 0) throw InvalidArgument("ensemble csv: no particles");
  out.positions = Eigen::Map<Matrix>(values.data(), rows, cols);
  return out;
}

void write_binary(const ParticleEnsemble& ensemble, std::ostream& out) {
  const std::uint64_t header[3] = {ensemble.generation,
                                   static_cast<std::uint64_t>(ensemble.count()),
                                   static_cast<std::uint64_t>(ensemble.dim())};
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(ensemble.positions.data()),
            static_cast<std::streamsize>(ensemble.positions.size() * sizeof(double)));
}

ParticleEnsemble read_binary(std::istream& in) {
  char magic[8];
  std::uint64_t header[3];
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw InvalidArgument("ensemble binary: bad header");
  }
  ParticleEnsemble out;
  out.generation = header[0];
  out.positions.resize(static_cast<Eigen::Index>(header[1]), static_cast<Eigen::Index>(header[2]));
  in.read(reinterpret_cast<char*>(out.positions.data()),
          static_cast<std::streamsize>(out.positions.size() * sizeof(double)));
  if (!in) throw InvalidArgument("ensemble binary: truncated payload");
  return out;
}

void save_ensemble(const ParticleEnsemble& ensemble, const std::string& path) {
  const bool csv = ends_with(path, ".csv");
  std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  csv ? write_csv(ensemble, out) : write_binary(ensemble, out);
}

ParticleEnsemble load_ensemble(const std::string& path) {
  const bool csv = ends_with(path, ".csv");
  std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return csv ? read_csv(in) : read_binary(in);
}

}  // namespace papal
