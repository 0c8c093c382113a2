// Copyright 2026 The advscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

// Channel-aware RSSI analytics over decoded advertising reports.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "advscope/hci_codec.h"
#include "advscope/result.h"

namespace advscope {

inline constexpr std::array<int, 3> kAdvertisingChannels = {37, 38, 39};

// Raw RSSI samples of one (device, channel) cell. Statistics are computed
// from the samples on every call.
class RssiSamples {
 public:
  void Add(int rssi_dbm) { values_.push_back(rssi_dbm); }

  size_t count() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<int>& values() const { return values_; }

  // Arithmetic mean; 0 when empty.
  double Mean() const;
  // Midpoint of the two central values for even counts; 0 when empty.
  double Median() const;
  // Population standard deviation (divides by n); 0 when empty.
  double StdDev() const;

 private:
  std::vector<int> values_;
};

struct DeviceStats {
  std::map<int, RssiSamples> channels;  // keyed 37, 38, 39
  // Reports whose channel index is 3..7 (or a channel-less decode).
  uint64_t unknown_channel_count = 0;
  uint64_t total_reports = 0;
  uint64_t first_seen_us = 0;
  uint64_t last_seen_us = 0;
  std::optional<int8_t> advertised_tx_power_dbm;
};

// Per-device, per-channel RSSI aggregates. Single writer.
class SessionStats {
 public:
  // The report's event type should be decoded in enhanced mode; in standard
  // mode every report lands on channel 37.
  void IngestReport(const AdvReport& report, uint64_t timestamp_us);

  // Same as IngestReport but records `rssi_dbm` instead of the report's RSSI
  // (used for transmit-power adjusted samples).
  void IngestSample(const AdvReport& report, uint64_t timestamp_us,
                    int rssi_dbm);

  const std::map<DeviceAddress, DeviceStats>& devices() const {
    return devices_;
  }
  const DeviceStats* Find(const DeviceAddress& address) const;

  uint64_t total_reports() const { return total_reports_; }
  uint64_t unknown_channel_count() const { return unknown_channel_count_; }

  // All samples on `channel`, pooled over devices.
  RssiSamples Pooled(int channel) const;

 private:
  std::map<DeviceAddress, DeviceStats> devices_;
  uint64_t total_reports_ = 0;
  uint64_t unknown_channel_count_ = 0;
};

struct BlacklistParams {
  uint32_t min_samples_per_channel = 5;
  double deviation_threshold_db = 10.0;  // must be >= 0

  Status Validate() const;
};

struct ChannelEvidence {
  int channel = 0;
  uint64_t samples = 0;
  bool eligible = false;  // samples >= min_samples_per_channel
  std::optional<double> pooled_median_dbm;
  // Best median among the other eligible channels minus this channel's
  // median. Present only when this channel and at least one other are
  // eligible.
  std::optional<double> deficit_db;
  bool blacklisted = false;
};

struct InterferenceReport {
  std::set<int> blacklisted;  // empty or exactly one channel
  std::array<ChannelEvidence, 3> evidence;
};

// Pools every device's samples per channel. The eligible channel with the
// lowest median is blacklisted when it sits more than the threshold below
// the best other eligible channel. Fewer than two eligible channels means
// there is nothing to compare against and nothing is blacklisted.
InterferenceReport DetectInterference(const SessionStats& stats,
                                      const BlacklistParams& params);

// Normalises an RSSI sample to a common transmit power.
inline int AdjustedRssi(int rssi_dbm, int tx_power_dbm, int reference_tx_dbm) {
  return rssi_dbm - (tx_power_dbm - reference_tx_dbm);
}

struct PathLossParams {
  double reference_rssi_at_1m = -56.0;
  double path_loss_exponent = 2.0;  // must be > 0

  Status Validate() const;
};

// Log-distance model: 10^((reference - rssi) / (10 * exponent)) metres.
double EstimateDistance(double rssi_dbm, const PathLossParams& params);

// BLE advertising channels within +-11 MHz of a 2.4 GHz Wi-Fi channel centre.
Result<std::set<int>> WifiOverlap(int wifi_channel);

inline constexpr int kWifiHalfWidthMhz = 11;
int AdvertisingChannelCenterMhz(int ble_channel);
int WifiChannelCenterMhz(int wifi_channel);

struct DistanceEstimate {
  double distance_m = 0;
  double mean_rssi_dbm = 0;
  std::set<int> used_channels;
  uint64_t sample_count = 0;
};

// Distance from the mean RSSI pooled over the device's samples on channels
// not in `blacklist`. An empty blacklist gives the naive estimate.
Result<DistanceEstimate> ChannelAwareEstimate(const SessionStats& stats,
                                              const DeviceAddress& address,
                                              const PathLossParams& params,
                                              const std::set<int>& blacklist);

struct ScenarioSpec {
  uint64_t seed = 1;
  uint32_t advertiser_count = 1;
  double true_distance_m = 1.0;
  int tx_power_dbm = 0;
  PathLossParams path_loss;
  std::map<int, double> per_channel_offset_db;  // keyed 37, 38, 39
  double noise_sigma_db = 0.0;
  uint32_t reports_per_channel = 10;

  Status Validate() const;
};

struct TimedReport {
  uint64_t timestamp_us = 0;
  AdvReport report;

  bool operator==(const TimedReport&) const = default;
};

// Deterministic synthetic trace: per repetition, per advertiser, one report
// on each of channels 37, 38, 39 with
//   rssi = ref - 10 * n * log10(d) + offset[ch] + N(0, sigma)
// rounded to the nearest dBm and clamped to int8. Gaussian noise is drawn
// with Box-Muller from std::mt19937_64 seeded with `seed`; see
// GaussianSource.
std::vector<TimedReport> SynthTrace(const ScenarioSpec& spec);

// Standard normal deviates from std::mt19937_64, whose output sequence is
// fixed by the C++ standard. Each deviate consumes two 64-bit draws:
//   u = ((draw >> 11) + 0.5) * 2^-53
//   z = sqrt(-2 ln u1) * cos(2 pi u2)
class GaussianSource {
 public:
  explicit GaussianSource(uint64_t seed);

  double Next();
  uint64_t NextBits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace advscope
