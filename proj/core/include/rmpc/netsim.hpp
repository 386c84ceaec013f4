#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rmpc/controller.hpp"

namespace rmpc {

enum class PacketKind : std::uint32_t { optimal_polytope = 0, extended = 1 };

/// What the central node sends to the local node after a QP: the feedback
/// slice (K, b) and the region on which it may be reused.
///
/// Wire format, all little-endian: "RMPC", kind (u32), n, m, r1, r2 (u16
/// each), then doubles row-major in field order K, b, T, d and, for extended
/// packets, T3, T2, d2. r1 is the row count of T; r2 is 1 for extended
/// packets (one quadric) and 0 otherwise.
struct LawPacket {
  PacketKind kind = PacketKind::optimal_polytope;
  Matrix K;
  Vector b;
  Matrix T;
  Vector d;
  Matrix T3;
  RowVector T2;
  double d2 = 0.0;

  int n() const { return static_cast<int>(K.cols()); }
  int m() const { return static_cast<int>(K.rows()); }
};

constexpr std::size_t kPacketHeaderBytes = 16;

std::size_t packet_size(PacketKind kind, int n, int m, int rows);

LawPacket make_packet(const RegionBuild& build);
/// Region the local node tests against, rebuilt from packet contents only.
ValidityRegion packet_region(const LawPacket& packet);

std::vector<std::uint8_t> serialize_packet(const LawPacket& packet);
/// Throws MalformedPacket on bad magic, unknown kind or wrong length.
LawPacket deserialize_packet(std::span<const std::uint8_t> bytes);

struct BusEvent {
  int step = 0;
  std::size_t bytes_up = 0;
  std::size_t bytes_down = 0;
  PacketKind kind = PacketKind::optimal_polytope;
  Provenance provenance = Provenance::optimal;
  int rows = 0;
};

struct Telemetry {
  long long qp_count = 0;
  long long local_flops = 0;
  /// Packet bytes plus 8 n bytes per state upload.
  long long bytes_tx = 0;
  long long messages = 0;
  double total_cost = 0.0;
  int steps = 0;
  bool converged = false;
  std::vector<BusEvent> events;
};

struct NetworkedRun {
  Trajectory trajectory;
  Telemetry telemetry;
};

/// Closed loop split into a local node (evaluates the law and tests region
/// membership on packet contents) and a central node (solves QPs on request)
/// joined by an in-process bus. States and inputs equal run_trajectory's
/// bit for bit.
NetworkedRun run_networked(const CondensedQP& qp, const ControllerOptions& opts, const Vector& x0,
                           const RegionCache* cache = nullptr);

}  // namespace rmpc
