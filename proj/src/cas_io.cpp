#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <vector>

#include "daa/cas.hpp"

namespace daa {

namespace {

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t n) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1u) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xffffffffu;
  for (std::size_t i = 0; i < n; ++i) {
    crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
  }
  return crc ^ 0xffffffffu;
}

struct Writer {
  std::vector<std::uint8_t> buf;

  void u8(std::uint8_t x) { buf.push_back(x); }
  void u32(std::uint32_t x) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
  void u64(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
  void f32(float x) {
    std::uint32_t bits;
    std::memcpy(&bits, &x, 4);
    u32(bits);
  }
  void f64(double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    u64(bits);
  }
};

struct Reader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > size) {
      throw PolicyIoError(PolicyIoError::Kind::Truncated, "policy file truncated");
    }
  }
  std::uint8_t u8() {
    need(1);
    return data[pos++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(data[pos++]) << (8 * i);
    return x;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(data[pos++]) << (8 * i);
    return x;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float x;
    std::memcpy(&x, &bits, 4);
    return x;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
  }
};

constexpr char kMagic[4] = {'A', 'V', 'D', 'P'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_policy(const PolicyTable& table, const std::string& path) {
  const MdpSpec& spec = table.spec;
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kVersion);
  w.u32(4);
  const std::vector<double>* grids[4] = {&spec.h_grid, &spec.dh_own_grid,
                                         &spec.dh_int_grid, &spec.tau_grid};
  for (const auto* g : grids) w.u32(static_cast<std::uint32_t>(g->size()));
  for (const auto* g : grids) {
    for (double x : *g) w.f64(x);
  }
  w.u32(static_cast<std::uint32_t>(spec.actions.size()));
  for (double q : table.q) w.f32(static_cast<float>(q));
  // Extension block: the rest of the spec plus solver metadata, still under
  // the trailing CRC.
  for (Advisory a : spec.actions) w.u8(static_cast<std::uint8_t>(a));
  w.f64(spec.rewards.nmac_penalty);
  w.f64(spec.rewards.alert_cost);
  w.f64(spec.rewards.reversal_cost);
  w.f64(spec.rewards.strengthen_cost);
  w.f64(spec.discount);
  w.f64(spec.dt);
  w.f64(spec.nmac_altitude);
  w.f64(spec.compliance.own_accel);
  w.f64(spec.compliance.intruder_accel);
  w.f64(spec.compliance.intruder_accel_prob);
  w.u32(static_cast<std::uint32_t>(table.info.iterations));
  w.f64(table.info.residual);
  w.u32(crc32_ieee(w.buf.data(), w.buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw PolicyIoError(PolicyIoError::Kind::Io, "cannot open for writing: " + path);
  }
  out.write(reinterpret_cast<const char*>(w.buf.data()),
            static_cast<std::streamsize>(w.buf.size()));
  if (!out) {
    throw PolicyIoError(PolicyIoError::Kind::Io, "write failed: " + path);
  }
}

PolicyTable load_policy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PolicyIoError(PolicyIoError::Kind::Io, "cannot open: " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  Reader r{bytes.data(), bytes.size()};

  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw PolicyIoError(PolicyIoError::Kind::BadMagic, "bad policy file magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw PolicyIoError(PolicyIoError::Kind::BadVersion,
                        "unsupported policy file version " + std::to_string(version));
  }
  const std::uint32_t dims = r.u32();
  if (dims != 4) {
    throw PolicyIoError(PolicyIoError::Kind::BadValue,
                        "expected 4 grid dimensions, found " + std::to_string(dims));
  }

  PolicyTable table;
  MdpSpec& spec = table.spec;
  std::uint32_t sizes[4];
  for (auto& s : sizes) s = r.u32();
  std::vector<double>* grids[4] = {&spec.h_grid, &spec.dh_own_grid,
                                   &spec.dh_int_grid, &spec.tau_grid};
  for (int d = 0; d < 4; ++d) {
    grids[d]->resize(sizes[d]);
    for (auto& x : *grids[d]) x = r.f64();
  }
  const std::uint32_t n_actions = r.u32();
  if (n_actions == 0 || n_actions > 64) {
    throw PolicyIoError(PolicyIoError::Kind::BadValue, "implausible advisory count");
  }
  const std::size_t nodes = static_cast<std::size_t>(sizes[0]) * sizes[1] *
                            sizes[2] * sizes[3];
  const std::size_t q_count = nodes * n_actions * n_actions;
  r.need(q_count * 4);
  table.q.resize(q_count);
  for (auto& q : table.q) q = static_cast<double>(r.f32());

  spec.actions.resize(n_actions);
  for (auto& a : spec.actions) {
    const std::uint8_t id = r.u8();
    if (id >= kNumAdvisories) {
      throw PolicyIoError(PolicyIoError::Kind::BadValue, "unknown advisory id");
    }
    a = static_cast<Advisory>(id);
  }
  spec.rewards.nmac_penalty = r.f64();
  spec.rewards.alert_cost = r.f64();
  spec.rewards.reversal_cost = r.f64();
  spec.rewards.strengthen_cost = r.f64();
  spec.discount = r.f64();
  spec.dt = r.f64();
  spec.nmac_altitude = r.f64();
  spec.compliance.own_accel = r.f64();
  spec.compliance.intruder_accel = r.f64();
  spec.compliance.intruder_accel_prob = r.f64();
  table.info.iterations = static_cast<int>(r.u32());
  table.info.residual = r.f64();

  if (r.pos + 4 != r.size) {
    throw PolicyIoError(PolicyIoError::Kind::BadValue,
                        "unexpected trailing bytes in policy file");
  }
  const std::uint32_t stored_crc = r.u32();
  if (crc32_ieee(bytes.data(), bytes.size() - 4) != stored_crc) {
    throw PolicyIoError(PolicyIoError::Kind::BadChecksum, "policy file CRC mismatch");
  }

  try {
    validate_mdp(spec);
  } catch (const std::invalid_argument& e) {
    throw PolicyIoError(PolicyIoError::Kind::BadValue,
                        std::string("invalid policy spec: ") + e.what());
  }
  table.info.backend = "file";
  return table;
}

void export_q_csv(const PolicyTable& table, std::ostream& out) {
  const MdpSpec& spec = table.spec;
  const std::size_t na = spec.num_actions();
  out << "h,dh_own,dh_int,tau,prev";
  for (Advisory a : spec.actions) out << ",q_" << advisory_name(a);
  out << "\n";
  char buf[64];
  for (std::size_t ih = 0; ih < spec.h_grid.size(); ++ih) {
    for (std::size_t id = 0; id < spec.dh_own_grid.size(); ++id) {
      for (std::size_t ii = 0; ii < spec.dh_int_grid.size(); ++ii) {
        for (std::size_t it = 0; it < spec.tau_grid.size(); ++it) {
          const std::size_t node = table.node_index(ih, id, ii, it);
          for (std::size_t p = 0; p < na; ++p) {
            std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g", spec.h_grid[ih],
                          spec.dh_own_grid[id], spec.dh_int_grid[ii],
                          spec.tau_grid[it]);
            out << buf << ',' << advisory_name(spec.actions[p]);
            for (std::size_t a = 0; a < na; ++a) {
              std::snprintf(buf, sizeof(buf), ",%.9g", table.q_at(node, p, a));
              out << buf;
            }
            out << "\n";
          }
        }
      }
    }
  }
}

}  // namespace daa
