#include "sitewatch/model/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sitewatch {

namespace {

constexpr const char* kModelMagic = "sitewatch-model";
constexpr const char* kBundleMagic = "sitewatch-bundle";
constexpr int kVersion = 1;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_values(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << num(values[i]);
  out << '\n';
}

template <typename T>
T expect(std::istream& in, const std::string& key) {
  std::string got;
  T value{};
  if (!(in >> got) || got != key) {
    throw std::runtime_error("model checkpoint: expected '" + key + "', found '" + got + "'");
  }
  if (!(in >> value)) throw std::runtime_error("model checkpoint: bad value for '" + key + "'");
  return value;
}

std::vector<double> read_values(std::istream& in, std::size_t n, const std::string& what) {
  std::vector<double> v(n);
  for (auto& x : v) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("model checkpoint: truncated " + what);
    try {
      x = std::stod(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("model checkpoint: bad number in " + what + ": " + tok);
    }
  }
  return v;
}

}  // namespace

void write_model(std::ostream& out, const TrainedModel& model) {
  const auto& c = model.config;
  const auto& h = model.head;
  out << kModelMagic << ' ' << kVersion << '\n';
  out << "architecture " << to_string(h.architecture()) << '\n';
  out << "input_dim " << h.input_dim() << '\n';
  out << "hidden " << h.hidden() << '\n';
  out << "loss " << to_string(c.loss) << '\n';
  out << "alpha " << num(c.alpha) << '\n';
  out << "beta " << num(c.beta) << '\n';
  out << "learning_rate " << num(c.learning_rate) << '\n';
  out << "batch_size " << c.batch_size << '\n';
  out << "epochs " << c.epochs << '\n';
  out << "seed " << c.seed << '\n';
  out << "l2 " << num(c.l2) << '\n';
  out << "validation_fraction " << num(c.validation_fraction) << '\n';
  out << "best_epoch " << model.best_epoch << '\n';
  out << "best_validation_f1 " << num(model.best_validation_f1) << '\n';
  out << "initial_train_ce " << num(model.initial_train_ce) << '\n';
  out << "prior " << num(model.prior.p_hat[0]) << ' ' << num(model.prior.p_hat[1]) << '\n';
  out << "history " << model.history.size() << '\n';
  for (const auto& r : model.history) {
    out << r.epoch << ' ' << num(r.train_ce) << ' ' << num(r.validation_f1) << '\n';
  }
  out << "scaler " << model.scaler.mean.size() << '\n';
  write_values(out, model.scaler.mean);
  write_values(out, model.scaler.scale);
  out << "params " << h.params().size() << '\n';
  write_values(out, h.params());
  out << "end\n";
}

TrainedModel read_model(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kModelMagic) {
    throw std::runtime_error("not a model checkpoint (missing '" + std::string(kModelMagic) + "' header)");
  }
  if (version != kVersion) throw std::runtime_error("unsupported model checkpoint version " + std::to_string(version));
  TrainedModel m;
  auto& c = m.config;
  c.architecture = parse_architecture(expect<std::string>(in, "architecture"));
  const auto dim = expect<std::size_t>(in, "input_dim");
  c.hidden = expect<std::size_t>(in, "hidden");
  c.loss = parse_loss(expect<std::string>(in, "loss"));
  c.alpha = expect<double>(in, "alpha");
  c.beta = expect<double>(in, "beta");
  c.learning_rate = expect<double>(in, "learning_rate");
  c.batch_size = expect<std::size_t>(in, "batch_size");
  c.epochs = expect<std::size_t>(in, "epochs");
  c.seed = expect<std::uint64_t>(in, "seed");
  c.l2 = expect<double>(in, "l2");
  c.validation_fraction = expect<double>(in, "validation_fraction");
  m.best_epoch = expect<std::size_t>(in, "best_epoch");
  m.best_validation_f1 = expect<double>(in, "best_validation_f1");
  m.initial_train_ce = expect<double>(in, "initial_train_ce");
  m.prior.p_hat[0] = expect<double>(in, "prior");
  if (!(in >> m.prior.p_hat[1])) throw std::runtime_error("model checkpoint: bad prior");
  const auto n_hist = expect<std::size_t>(in, "history");
  for (std::size_t i = 0; i < n_hist; ++i) {
    EpochRecord r;
    if (!(in >> r.epoch >> r.train_ce >> r.validation_f1)) throw std::runtime_error("model checkpoint: truncated history");
    m.history.push_back(r);
  }
  const auto n_scale = expect<std::size_t>(in, "scaler");
  if (n_scale != dim) throw std::runtime_error("model checkpoint: scaler size does not match input_dim");
  m.scaler.mean = read_values(in, n_scale, "scaler mean");
  m.scaler.scale = read_values(in, n_scale, "scaler scale");
  m.head = ClassifierHead(c.architecture, dim, c.hidden);
  const auto n_params = expect<std::size_t>(in, "params");
  if (n_params != m.head.params().size()) {
    throw std::runtime_error("model checkpoint: expected " + std::to_string(m.head.params().size()) +
                             " parameters, found " + std::to_string(n_params));
  }
  m.head.params() = read_values(in, n_params, "params");
  std::string end;
  if (!(in >> end) || end != "end") throw std::runtime_error("model checkpoint: missing 'end'");
  return m;
}

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle) {
  std::ostringstream buf;
  buf << kBundleMagic << ' ' << kVersion << '\n' << "target " << bundle.target << '\n';
  bundle.features.write(buf);
  write_model(buf, bundle.model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model bundle: " + path.string());
  out << buf.str();
  if (!out) throw std::runtime_error("failed writing model bundle: " + path.string());
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model bundle: " + path.string());
  std::string magic, key, target;
  int version = 0;
  if (!(in >> magic >> version) || magic != kBundleMagic || version != kVersion) {
    throw std::runtime_error("not a model bundle: " + path.string());
  }
  if (!(in >> key >> target) || key != "target") throw std::runtime_error("model bundle missing target: " + path.string());
  in.ignore(1);
  FeatureSpace space = FeatureSpace::read(in);
  TrainedModel model = read_model(in);
  if (model.input_dim() != space.dimension()) {
    throw std::runtime_error("model bundle " + path.string() + ": feature dimension " +
                             std::to_string(space.dimension()) + " does not match model input_dim " +
                             std::to_string(model.input_dim()));
  }
  return ModelBundle{target, std::move(space), std::move(model)};
}

}  // namespace sitewatch
