#include "sdp/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sdp/errors.hpp"

namespace sdp {
namespace {

constexpr std::uint8_t kVersion = 1;

class Writer {
 public:
  void bytes(const char* s, std::size_t n) { out_.insert(out_.end(), s, s + n); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t>& buffer() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(const std::vector<std::uint8_t>& in, std::size_t pos = 0) : in_(in), pos_(pos) {}
  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) throw ConfigError("truncated configuration record");
  }
  void magic(const char* m) {
    need(4);
    if (std::memcmp(in_.data() + pos_, m, 4) != 0) throw ConfigError(std::string("bad magic, expected ") + m);
    pos_ += 4;
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  const std::uint8_t* at() const { return in_.data() + pos_; }

 private:
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_;
};

void write_record(Writer& w, const Configuration& c) {
  const Region& r = c.region();
  w.bytes("SDPC", 4);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(c.layer()));
  w.u8(static_cast<std::uint8_t>(r.dim()));
  w.u8(static_cast<std::uint8_t>(r.kind()));
  for (int i = 0; i < r.dim(); ++i) w.i64(r.lo(i));
  for (int i = 0; i < r.dim(); ++i) w.i64(r.hi(i));
  w.u8(c.key() ? 1 : 0);
  w.u64(c.key() ? c.key()->experiment_seed : 0);
  w.u64(c.key() ? c.key()->replica_index : 0);
  w.f64(c.probability());
  w.u64(r.edge_count());

  auto& buf = w.buffer();
  const std::size_t start = buf.size();
  buf.resize(start + (r.edge_count() + 7) / 8, 0);
  std::uint64_t k = 0;
  for (std::uint64_t i = 0; i < r.site_count(); ++i) {
    for (int a = 0; a < r.dim(); ++a) {
      if (!r.has_forward_neighbor(i, a)) continue;
      if (c.is_open(i, a)) buf[start + k / 8] |= static_cast<std::uint8_t>(1U << (k % 8));
      ++k;
    }
  }
}

// Rebuilds the region from its bounds; box and slab-box kinds recover their descriptor.
Region region_from(RegionKind kind, const std::vector<std::int64_t>& lo, const std::vector<std::int64_t>& hi) {
  const auto d = lo.size();
  Site center{std::vector<std::int64_t>(d)};
  for (std::size_t i = 0; i < d; ++i) center.coords[i] = (lo[i] + hi[i]) / 2;
  if (kind == RegionKind::box) {
    auto r = Region::box(center, (hi[0] - lo[0]) / 2);
    if (r.lo_bounds().size() == d && std::equal(lo.begin(), lo.end(), r.lo_bounds().begin()) &&
        std::equal(hi.begin(), hi.end(), r.hi_bounds().begin())) {
      return r;
    }
  } else if (kind == RegionKind::slab_box && d >= 2) {
    const auto height = d > 2 ? (hi[2] - lo[2]) / 2 : 0;
    auto r = Region::slab_box(center, height, (hi[0] - lo[0]) / 2);
    if (std::equal(lo.begin(), lo.end(), r.lo_bounds().begin()) &&
        std::equal(hi.begin(), hi.end(), r.hi_bounds().begin())) {
      return r;
    }
  }
  return Region::from_bounds(lo, hi);
}

Configuration read_record(Reader& rd) {
  rd.magic("SDPC");
  if (rd.u8() != kVersion) throw ConfigError("unsupported configuration version");
  const auto layer = rd.u8();
  if (layer > static_cast<std::uint8_t>(Layer::derived)) throw ConfigError("bad layer tag");
  const int d = rd.u8();
  check_dimension(d);
  const auto kind = rd.u8();
  if (kind > static_cast<std::uint8_t>(RegionKind::generic)) throw ConfigError("bad region kind");
  std::vector<std::int64_t> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (auto& v : lo) v = rd.i64();
  for (auto& v : hi) v = rd.i64();
  const Region region = region_from(static_cast<RegionKind>(kind), lo, hi);
  const bool has_key = (rd.u8() & 1U) != 0;
  SeedKey key{rd.u64(), rd.u64()};
  const double p = rd.f64();
  const auto edges = rd.u64();
  if (edges != region.edge_count()) throw ConfigError("edge count does not match region");
  rd.need((edges + 7) / 8);
  const std::uint8_t* bits = rd.at();

  Configuration c(region, static_cast<Layer>(layer));
  c.set_provenance(has_key ? std::optional<SeedKey>(key) : std::nullopt, p, static_cast<Layer>(layer));
  std::uint64_t k = 0;
  for (std::uint64_t i = 0; i < region.site_count(); ++i) {
    for (int a = 0; a < d; ++a) {
      if (!region.has_forward_neighbor(i, a)) continue;
      if ((bits[k / 8] >> (k % 8)) & 1U) c.set(i, a, true);
      ++k;
    }
  }
  rd.skip((edges + 7) / 8);
  return c;
}

}  // namespace

std::vector<std::uint8_t> serialize(const Configuration& config) {
  Writer w;
  write_record(w, config);
  return std::move(w.buffer());
}

Configuration deserialize_configuration(const std::vector<std::uint8_t>& bytes) {
  Reader rd(bytes);
  auto c = read_record(rd);
  if (rd.pos() != bytes.size()) throw ConfigError("trailing bytes after configuration record");
  return c;
}

std::vector<std::uint8_t> serialize(const SdpTriple& triple) {
  Writer w;
  w.bytes("SDPT", 4);
  w.u8(kVersion);
  w.u8(4);
  write_record(w, triple.omega_p);
  write_record(w, triple.omega_tilde_p);
  write_record(w, triple.omega_prime_eps);
  write_record(w, triple.omega_tilde_p_eps);
  return std::move(w.buffer());
}

SdpTriple deserialize_triple(const std::vector<std::uint8_t>& bytes) {
  Reader rd(bytes);
  rd.magic("SDPT");
  if (rd.u8() != kVersion) throw ConfigError("unsupported triple version");
  if (rd.u8() != 4) throw ConfigError("triple must hold four layers");
  SdpTriple t{read_record(rd), read_record(rd), read_record(rd), read_record(rd)};
  const Layer expected[] = {Layer::omega_p, Layer::omega_tilde_p, Layer::omega_prime_eps, Layer::omega_tilde_p_eps};
  const Configuration* got[] = {&t.omega_p, &t.omega_tilde_p, &t.omega_prime_eps, &t.omega_tilde_p_eps};
  for (int i = 0; i < 4; ++i) {
    if (got[i]->layer() != expected[i]) throw ConfigError("triple layer out of order");
  }
  if (rd.pos() != bytes.size()) throw ConfigError("trailing bytes after triple");
  return t;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExtentError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace sdp
