#include "sclaw/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace sclaw {

namespace {

constexpr char kMagic[8] = {'S', 'C', 'L', 'S', 'N', 'A', 'P', '1'};

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  bool at_end() const { return pos_ == bytes_.size(); }
  void magic() {
    need(8);
    if (std::memcmp(bytes_.data(), kMagic, 8) != 0) throw std::runtime_error("snapshot: bad magic");
    pos_ += 8;
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("snapshot: truncated file");
  }
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Snapshot make_snapshot(const State& state, const NoisePath& path, const Stepper& stepper) {
  Snapshot s;
  s.modes = state.u.size();
  s.scheme = stepper.config().scheme;
  s.t = state.t;
  s.nu = stepper.model().nu;
  s.dt = stepper.dt();
  s.seed = path.seed();
  s.step = state.step;
  s.noise_fine_steps = path.fine_steps();
  s.coeffs.assign(state.u.coeffs().begin(), state.u.coeffs().end());
  s.convolution.assign(path.convolution().begin(), path.convolution().end());
  return s;
}

std::vector<unsigned char> encode_snapshot(const Snapshot& snap) {
  if (snap.coeffs.size() != static_cast<std::size_t>(snap.modes) ||
      snap.convolution.size() != static_cast<std::size_t>(snap.modes))
    throw std::invalid_argument("snapshot: array sizes do not match modes");
  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(snap.modes));
  put_u32(out, static_cast<std::uint32_t>(snap.scheme));
  put_f64(out, snap.t);
  put_f64(out, snap.nu);
  put_f64(out, snap.dt);
  put_u64(out, snap.seed);
  put_u64(out, snap.step);
  put_u64(out, snap.noise_fine_steps);
  for (double c : snap.coeffs) put_f64(out, c);
  for (double c : snap.convolution) put_f64(out, c);
  return out;
}

Snapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
  Reader r(bytes);
  r.magic();
  Snapshot s;
  s.modes = static_cast<int>(r.u32());
  const std::uint32_t scheme = r.u32();
  if (scheme > 1) throw std::runtime_error("snapshot: unknown scheme id");
  s.scheme = static_cast<Scheme>(scheme);
  s.t = r.f64();
  s.nu = r.f64();
  s.dt = r.f64();
  s.seed = r.u64();
  s.step = r.u64();
  s.noise_fine_steps = r.u64();
  if (s.modes <= 0 || s.modes % 2 != 0 || s.modes > (1 << 24)) throw std::runtime_error("snapshot: bad mode count");
  s.coeffs.resize(static_cast<std::size_t>(s.modes));
  s.convolution.resize(static_cast<std::size_t>(s.modes));
  for (double& c : s.coeffs) c = r.f64();
  for (double& c : s.convolution) c = r.f64();
  if (!r.at_end()) throw std::runtime_error("snapshot: trailing bytes");
  return s;
}

void write_snapshot(const std::filesystem::path& file, const Snapshot& snap) {
  const auto bytes = encode_snapshot(snap);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("snapshot: cannot open " + file.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("snapshot: write failed for " + file.string());
}

Snapshot read_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + file.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

State restore_snapshot(const Snapshot& snap, const Stepper& stepper, NoisePath& path) {
  if (snap.modes != stepper.config().modes || snap.nu != stepper.model().nu || snap.dt != stepper.dt() ||
      snap.scheme != stepper.config().scheme)
    throw std::invalid_argument("snapshot does not match the configured model and solver");
  if (snap.seed != path.seed()) throw std::invalid_argument("snapshot seed differs from the noise path seed");
  path.restore(snap.noise_fine_steps, snap.t, snap.convolution);
  return State{snap.t, snap.step, SpectralField(stepper.basis(), snap.coeffs)};
}

}  // namespace sclaw
