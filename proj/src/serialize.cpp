#include "dir/serialize.hpp"

#include "dir/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

namespace dir {

namespace {

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoError(std::string("truncated container: ") + what);
  return value;
}

void put_cmat(std::ostream& out, const CMat& mat) {
  out.write(reinterpret_cast<const char*>(mat.data.data()),
            static_cast<std::streamsize>(mat.data.size() * sizeof(Cpx)));
}

void get_cmat(std::istream& in, CMat& mat) {
  in.read(reinterpret_cast<char*>(mat.data.data()),
          static_cast<std::streamsize>(mat.data.size() * sizeof(Cpx)));
  if (!in) throw IoError("truncated container: complex payload");
}

void check_magic(std::istream& in, const char* magic) {
  char buf[4];
  in.read(buf, 4);
  if (!in || std::memcmp(buf, magic, 4) != 0) {
    throw IoError(std::string("bad magic, expected ") + magic);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  return in;
}

void bank_write(std::ostream& out, const KernelBank& bank) {
  out.write("DIRB", 4);
  put<uint32_t>(out, static_cast<uint32_t>(bank.entry_count()));
  for (size_t oi = 0; oi < bank.orders.size(); ++oi) {
    for (size_t si = 0; si < bank.scales.size(); ++si) {
      put<uint32_t>(out, static_cast<uint32_t>(bank.kind));
      put<int32_t>(out, bank.orders[oi].n);
      put<int32_t>(out, bank.orders[oi].m);
      put<int32_t>(out, bank.scales[si]);
      put<uint32_t>(out, static_cast<uint32_t>(bank.spec_cols));
      put<uint32_t>(out, static_cast<uint32_t>(bank.spec_rows));
      put<uint32_t>(out, bank.strategy.code());
      put_cmat(out, bank.spectra[oi * bank.scales.size() + si]);
    }
  }
}

} // namespace

void bank_save(const std::string& path, const KernelBank& bank) {
  auto out = open_out(path);
  bank_write(out, bank);
  if (!out) throw IoError("write failed: " + path);
}

std::string bank_to_bytes(const KernelBank& bank) {
  std::ostringstream out(std::ios::binary);
  bank_write(out, bank);
  return out.str();
}

KernelBank bank_load(const std::string& path) {
  auto in = open_in(path);
  check_magic(in, "DIRB");
  const uint32_t count = get<uint32_t>(in, "entry count");

  KernelBank bank;
  bool first = true;
  for (uint32_t i = 0; i < count; ++i) {
    const auto kind = static_cast<BasisKind>(get<uint32_t>(in, "kind"));
    const int n = get<int32_t>(in, "n");
    const int m = get<int32_t>(in, "m");
    const int w = get<int32_t>(in, "w");
    const int cols = static_cast<int>(get<uint32_t>(in, "M0"));
    const int rows = static_cast<int>(get<uint32_t>(in, "N0"));
    const auto strategy = IntegrationStrategy::from_code(get<uint32_t>(in, "strategy"));
    if (first) {
      bank.kind = kind;
      bank.spec_cols = cols;
      bank.spec_rows = rows;
      bank.strategy = strategy;
      first = false;
    } else if (kind != bank.kind || cols != bank.spec_cols || rows != bank.spec_rows ||
               !(strategy == bank.strategy)) {
      throw IoError("inconsistent bank entries: " + path);
    }
    if (std::find(bank.orders.begin(), bank.orders.end(), OrderPair{n, m}) == bank.orders.end()) {
      bank.orders.push_back({n, m});
    }
    if (std::find(bank.scales.begin(), bank.scales.end(), w) == bank.scales.end()) {
      bank.scales.push_back(w);
    }
    CMat spec(rows, cols);
    get_cmat(in, spec);
    bank.spectra.push_back(std::move(spec));
  }
  if (bank.spectra.size() != bank.orders.size() * bank.scales.size()) {
    throw IoError("bank is not a full (order x scale) grid: " + path);
  }
  return bank;
}

void field_save(const std::string& path, const MomentField& field) {
  auto out = open_out(path);
  out.write("DIRF", 4);
  put<uint8_t>(out, 0);
  put<uint32_t>(out, static_cast<uint32_t>(field.width));
  put<uint32_t>(out, static_cast<uint32_t>(field.height));
  put<uint32_t>(out, static_cast<uint32_t>(field.keys.size()));
  for (const ChannelKey& key : field.keys) {
    put<uint32_t>(out, static_cast<uint32_t>(field.kind));
    put<int32_t>(out, key.n);
    put<int32_t>(out, key.m);
    put<int32_t>(out, key.w);
  }
  for (const CMat& mat : field.channels) put_cmat(out, mat);
  if (!out) throw IoError("write failed: " + path);
}

MomentField field_load(const std::string& path) {
  auto in = open_in(path);
  check_magic(in, "DIRF");
  if (get<uint8_t>(in, "payload kind") != 0) throw IoError("not a moment field: " + path);
  MomentField field;
  field.width = static_cast<int>(get<uint32_t>(in, "width"));
  field.height = static_cast<int>(get<uint32_t>(in, "height"));
  const uint32_t count = get<uint32_t>(in, "channel count");
  for (uint32_t i = 0; i < count; ++i) {
    field.kind = static_cast<BasisKind>(get<uint32_t>(in, "kind"));
    ChannelKey key;
    key.n = get<int32_t>(in, "n");
    key.m = get<int32_t>(in, "m");
    key.w = get<int32_t>(in, "w");
    field.keys.push_back(key);
  }
  for (uint32_t i = 0; i < count; ++i) {
    CMat mat(field.height, field.width);
    get_cmat(in, mat);
    field.channels.push_back(std::move(mat));
  }
  return field;
}

void features_save(const std::string& path, const FeatureField& features) {
  auto out = open_out(path);
  out.write("DIRF", 4);
  put<uint8_t>(out, 1);
  put<uint32_t>(out, static_cast<uint32_t>(features.width));
  put<uint32_t>(out, static_cast<uint32_t>(features.height));
  put<uint32_t>(out, static_cast<uint32_t>(features.dim));
  for (int k = 0; k < features.dim; ++k) {
    put<uint32_t>(out, 0u);
    put<int32_t>(out, features.orders[k].n);
    put<int32_t>(out, features.orders[k].m);
    put<int32_t>(out, features.scales.size() == 1 ? features.scales.front() : -1);
  }
  // component-major payload
  const size_t cells = static_cast<size_t>(features.width) * features.height;
  std::vector<double> plane(cells);
  for (int k = 0; k < features.dim; ++k) {
    for (size_t c = 0; c < cells; ++c) plane[c] = features.data[c * features.dim + k];
    out.write(reinterpret_cast<const char*>(plane.data()),
              static_cast<std::streamsize>(cells * sizeof(double)));
  }
  out.write(reinterpret_cast<const char*>(features.valid.data()),
            static_cast<std::streamsize>(features.valid.size()));
  if (!out) throw IoError("write failed: " + path);
}

FeatureField features_load(const std::string& path) {
  auto in = open_in(path);
  check_magic(in, "DIRF");
  if (get<uint8_t>(in, "payload kind") != 1) throw IoError("not a feature field: " + path);
  FeatureField features;
  features.width = static_cast<int>(get<uint32_t>(in, "width"));
  features.height = static_cast<int>(get<uint32_t>(in, "height"));
  features.dim = static_cast<int>(get<uint32_t>(in, "dim"));
  int scale_tag = -1;
  for (int k = 0; k < features.dim; ++k) {
    get<uint32_t>(in, "kind");
    OrderPair pair;
    pair.n = get<int32_t>(in, "n");
    pair.m = get<int32_t>(in, "m");
    scale_tag = get<int32_t>(in, "w");
    features.orders.push_back(pair);
  }
  if (scale_tag > 0) features.scales = {scale_tag};
  const size_t cells = static_cast<size_t>(features.width) * features.height;
  features.data.assign(cells * features.dim, 0.0);
  std::vector<double> plane(cells);
  for (int k = 0; k < features.dim; ++k) {
    in.read(reinterpret_cast<char*>(plane.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
    if (!in) throw IoError("truncated feature payload: " + path);
    for (size_t c = 0; c < cells; ++c) features.data[c * features.dim + k] = plane[c];
  }
  features.valid.assign(cells, 0);
  in.read(reinterpret_cast<char*>(features.valid.data()), static_cast<std::streamsize>(cells));
  if (!in) throw IoError("truncated validity mask: " + path);
  return features;
}

void match_save(const std::string& path, const MatchField& mf) {
  auto out = open_out(path);
  out.write("DIRF", 4);
  put<uint8_t>(out, 2);
  put<uint32_t>(out, static_cast<uint32_t>(mf.width));
  put<uint32_t>(out, static_cast<uint32_t>(mf.height));
  put<uint32_t>(out, 3u); // dx, dy, distance
  for (int k = 0; k < 3; ++k) {
    put<uint32_t>(out, 0u);
    put<int32_t>(out, 0);
    put<int32_t>(out, 0);
    put<int32_t>(out, k);
  }
  const size_t cells = static_cast<size_t>(mf.width) * mf.height;
  std::vector<double> plane(cells);
  for (size_t c = 0; c < cells; ++c) plane[c] = mf.dx.data[c];
  out.write(reinterpret_cast<const char*>(plane.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
  for (size_t c = 0; c < cells; ++c) plane[c] = mf.dy.data[c];
  out.write(reinterpret_cast<const char*>(plane.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
  out.write(reinterpret_cast<const char*>(mf.dist.data.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
  out.write(reinterpret_cast<const char*>(mf.valid.data.data()),
            static_cast<std::streamsize>(cells));
  if (!out) throw IoError("write failed: " + path);
}

MatchField match_load(const std::string& path) {
  auto in = open_in(path);
  check_magic(in, "DIRF");
  if (get<uint8_t>(in, "payload kind") != 2) throw IoError("not a match field: " + path);
  MatchField mf;
  mf.width = static_cast<int>(get<uint32_t>(in, "width"));
  mf.height = static_cast<int>(get<uint32_t>(in, "height"));
  if (get<uint32_t>(in, "channel count") != 3) throw IoError("match field needs 3 channels");
  for (int k = 0; k < 3; ++k) {
    get<uint32_t>(in, "kind");
    get<int32_t>(in, "n");
    get<int32_t>(in, "m");
    get<int32_t>(in, "w");
  }
  const size_t cells = static_cast<size_t>(mf.width) * mf.height;
  mf.dx = Mat<int>(mf.height, mf.width);
  mf.dy = Mat<int>(mf.height, mf.width);
  mf.dist = DMat(mf.height, mf.width);
  mf.valid = ByteMat(mf.height, mf.width);
  std::vector<double> plane(cells);
  in.read(reinterpret_cast<char*>(plane.data()),
          static_cast<std::streamsize>(cells * sizeof(double)));
  for (size_t c = 0; c < cells; ++c) mf.dx.data[c] = static_cast<int>(plane[c]);
  in.read(reinterpret_cast<char*>(plane.data()),
          static_cast<std::streamsize>(cells * sizeof(double)));
  for (size_t c = 0; c < cells; ++c) mf.dy.data[c] = static_cast<int>(plane[c]);
  in.read(reinterpret_cast<char*>(mf.dist.data.data()),
          static_cast<std::streamsize>(cells * sizeof(double)));
  in.read(reinterpret_cast<char*>(mf.valid.data.data()), static_cast<std::streamsize>(cells));
  if (!in) throw IoError("truncated match field: " + path);
  return mf;
}

void digest_save(const std::string& path, const HashDigest& digest) {
  auto out = open_out(path);
  out.write("DIRH", 4);
  put<uint32_t>(out, digest.config_hash);
  put<uint32_t>(out, static_cast<uint32_t>(digest.grid_cols));
  put<uint32_t>(out, static_cast<uint32_t>(digest.grid_rows));
  put<uint32_t>(out, static_cast<uint32_t>(digest.dim));
  for (int k = 0; k < digest.dim; ++k) {
    put<double>(out, digest.range_min[k]);
    put<double>(out, digest.range_scale[k]);
  }
  out.write(reinterpret_cast<const char*>(digest.bytes.data()),
            static_cast<std::streamsize>(digest.bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

HashDigest digest_load(const std::string& path) {
  auto in = open_in(path);
  check_magic(in, "DIRH");
  HashDigest digest;
  digest.config_hash = get<uint32_t>(in, "config hash");
  digest.grid_cols = static_cast<int>(get<uint32_t>(in, "grid cols"));
  digest.grid_rows = static_cast<int>(get<uint32_t>(in, "grid rows"));
  digest.dim = static_cast<int>(get<uint32_t>(in, "dim"));
  for (int k = 0; k < digest.dim; ++k) {
    digest.range_min.push_back(get<double>(in, "range min"));
    digest.range_scale.push_back(get<double>(in, "range scale"));
  }
  const size_t cells = static_cast<size_t>(digest.grid_cols) * digest.grid_rows;
  digest.bytes.assign(cells * digest.dim, 0);
  in.read(reinterpret_cast<char*>(digest.bytes.data()),
          static_cast<std::streamsize>(digest.bytes.size()));
  if (!in) throw IoError("truncated digest payload: " + path);
  return digest;
}

} // namespace dir
