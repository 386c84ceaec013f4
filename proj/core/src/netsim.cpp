#include "rmpc/netsim.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <string>

#include "rmpc/errors.hpp"

namespace rmpc {
namespace {

constexpr char kMagic[4] = {'R', 'M', 'P', 'C'};

class Writer {
 public:
  explicit Writer(std::size_t size) { buf_.reserve(size); }
  void u16(std::uint32_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v & 0xff));
    buf_.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) buf_.push_back(static_cast<std::uint8_t>((v >> s) & 0xff));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int s = 0; s < 64; s += 8) buf_.push_back(static_cast<std::uint8_t>((bits >> s) & 0xff));
  }
  void matrix(const Matrix& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < M.cols(); ++j) f64(M(i, j));
  }
  void vector(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  std::vector<std::uint8_t> take() { return std::move(buf_); }
  void raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint32_t u16() {
    need(2);
    const std::uint32_t v = bytes_[pos_] | (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_ + k]) << (8 * k);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(bytes_[pos_ + k]) << (8 * k);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  Matrix matrix(int rows, int cols) {
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) M(i, j) = f64();
    return M;
  }
  Vector vector(int size) {
    Vector v(size);
    for (int i = 0; i < size; ++i) v(i) = f64();
    return v;
  }
  bool magic_ok() {
    need(4);
    const bool ok = std::memcmp(bytes_.data(), kMagic, 4) == 0;
    pos_ += 4;
    return ok;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw MalformedPacket("packet truncated");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void require_u16(long long v, const char* what) {
  if (v < 0 || v > std::numeric_limits<std::uint16_t>::max()) {
    throw InvalidSpec(std::string("packet field ") + what + " does not fit in 16 bits");
  }
}

}  // namespace

std::size_t packet_size(PacketKind kind, int n, int m, int rows) {
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t mm = static_cast<std::size_t>(m);
  const std::size_t r = static_cast<std::size_t>(rows);
  std::size_t doubles = mm * nn + mm + r * nn + r;
  if (kind == PacketKind::extended) doubles += nn * nn + nn + 1;
  return kPacketHeaderBytes + 8 * doubles;
}

LawPacket make_packet(const RegionBuild& build) {
  LawPacket p;
  p.K = build.law.K;
  p.b = build.law.b;
  const Polytope& poly = build.region.polytope();
  p.T = poly.T();
  p.d = poly.d();
  if (const auto* e = std::get_if<ExtendedRegion>(&build.region.shape)) {
    p.kind = PacketKind::extended;
    p.T3 = e->stab.T3;
    p.T2 = e->stab.T2;
    p.d2 = e->stab.d2;
  }
  return p;
}

ValidityRegion packet_region(const LawPacket& p) {
  Polytope poly(p.T, p.d);
  if (p.kind == PacketKind::optimal_polytope) return {OptimalRegion{std::move(poly)}, Provenance::optimal};
  StabilityQuadric stab;
  stab.T3 = p.T3;
  stab.T2 = p.T2;
  stab.d2 = p.d2;
  return {ExtendedRegion{std::move(poly), std::move(stab)}, Provenance::closed_form_F};
}

std::vector<std::uint8_t> serialize_packet(const LawPacket& p) {
  const int n = p.n();
  const int m = p.m();
  const int r1 = static_cast<int>(p.T.rows());
  const bool ext = p.kind == PacketKind::extended;
  require_u16(n, "n");
  require_u16(m, "m");
  require_u16(r1, "r1");
  if (p.b.size() != m || p.T.cols() != n || p.d.size() != r1) {
    throw DimensionMismatch("packet fields have inconsistent dimensions");
  }
  if (ext && (p.T3.rows() != n || p.T3.cols() != n || p.T2.size() != n)) {
    throw DimensionMismatch("packet quadric has inconsistent dimensions");
  }

  Writer w(packet_size(p.kind, n, m, r1));
  w.raw(kMagic, 4);
  w.u32(static_cast<std::uint32_t>(p.kind));
  w.u16(static_cast<std::uint32_t>(n));
  w.u16(static_cast<std::uint32_t>(m));
  w.u16(static_cast<std::uint32_t>(r1));
  w.u16(ext ? 1u : 0u);
  w.matrix(p.K);
  w.vector(p.b);
  w.matrix(p.T);
  w.vector(p.d);
  if (ext) {
    w.matrix(p.T3);
    w.vector(p.T2.transpose());
    w.f64(p.d2);
  }
  return w.take();
}

LawPacket deserialize_packet(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (!r.magic_ok()) throw MalformedPacket("bad magic");
  const std::uint32_t kind = r.u32();
  if (kind > 1) throw MalformedPacket("unknown packet kind " + std::to_string(kind));
  const int n = static_cast<int>(r.u16());
  const int m = static_cast<int>(r.u16());
  const int r1 = static_cast<int>(r.u16());
  const int r2 = static_cast<int>(r.u16());
  LawPacket p;
  p.kind = static_cast<PacketKind>(kind);
  if (r2 != (p.kind == PacketKind::extended ? 1 : 0)) throw MalformedPacket("quadric count does not match kind");
  if (bytes.size() != packet_size(p.kind, n, m, r1)) {
    throw MalformedPacket("packet length " + std::to_string(bytes.size()) + " does not match header (expected " +
                          std::to_string(packet_size(p.kind, n, m, r1)) + ")");
  }
  p.K = r.matrix(m, n);
  p.b = r.vector(m);
  p.T = r.matrix(r1, n);
  p.d = r.vector(r1);
  if (p.kind == PacketKind::extended) {
    p.T3 = r.matrix(n, n);
    p.T2 = r.vector(n).transpose();
    p.d2 = r.f64();
  }
  if (!p.K.allFinite() || !p.b.allFinite() || !p.T.allFinite() || !p.d.allFinite() ||
      !p.T3.allFinite() || !p.T2.allFinite() || !std::isfinite(p.d2)) {
    throw MalformedPacket("packet carries non-finite values");
  }
  return p;
}

NetworkedRun run_networked(const CondensedQP& qp, const ControllerOptions& opts, const Vector& x0,
                           const RegionCache* cache) {
  if (x0.size() != qp.n()) throw DimensionMismatch("initial state has wrong dimension");
  const int n = qp.n();
  RegionBuilder central(qp, opts.mode, opts.lambda, cache);

  // The local node only ever sees what came over the bus.
  struct Local {
    Matrix K;
    Vector b;
    ValidityRegion region;
    Provenance provenance = Provenance::optimal;
  };
  std::optional<Local> local;
  AffineLaw central_law;  // the simulator's view, used only for cost accounting

  NetworkedRun run;
  Trajectory& traj = run.trajectory;
  Telemetry& tel = run.telemetry;

  auto request = [&](const Vector& x, int step) {
    const std::size_t up = 8 * static_cast<std::size_t>(n);
    RegionBuild built = central.build(x);
    const std::vector<std::uint8_t> wire = serialize_packet(make_packet(built));
    const LawPacket received = deserialize_packet(wire);
    local = Local{received.K, received.b, packet_region(received), built.region.provenance};
    local->region.provenance = built.region.provenance;
    traj.law_active.push_back(built.law.active);
    central_law = std::move(built.law);
    ++tel.qp_count;
    tel.messages += 2;
    tel.bytes_tx += static_cast<long long>(up + wire.size());
    tel.events.push_back({step, up, wire.size(), received.kind, built.region.provenance,
                          static_cast<int>(received.T.rows())});
  };

  traj.states.push_back(x0);
  Vector x = x0;
  if (x.norm() <= opts.conv_tol) {
    request(x, 0);
    traj.converged = true;
  } else {
    for (int k = 0; k < opts.max_steps; ++k) {
      bool event = false;
      long long flops = 0;
      if (local) {
        traj.tested_provenance.push_back(local->provenance);
        traj.tested_rows.push_back(local->region.polytope_rows());
        traj.tested_extended.push_back(local->region.is_extended() ? 1 : 0);
        const Membership mem = membership(local->region, x);
        flops = mem.flops;
        if (!mem.member) {
          request(x, k);
          event = true;
        }
      } else {
        traj.tested_provenance.push_back(Provenance::optimal);
        traj.tested_rows.push_back(0);
        traj.tested_extended.push_back(0);
        request(x, k);
        event = true;
      }
      const Vector u = local->K * x + local->b;
      traj.inputs.push_back(u);
      traj.events.push_back(event ? 1 : 0);
      traj.flops.push_back(flops);
      traj.costs.push_back(law_cost(qp, central_law, x));
      traj.provenance.push_back(local->provenance);
      x = qp.spec.A * x + qp.spec.B * u;
      traj.states.push_back(x);
      if (x.norm() <= opts.conv_tol) {
        traj.converged = true;
        break;
      }
    }
  }
  traj.qp_count = tel.qp_count;
  tel.local_flops = traj.total_flops();
  tel.total_cost = traj.total_cost();
  tel.steps = traj.steps();
  tel.converged = traj.converged;
  return run;
}

}  // namespace rmpc
