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

#include "advscope/adv_analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace advscope {

double RssiSamples::Mean() const {
  if (values_.empty()) return 0.0;
  double sum = 0.0;
  for (int v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

double RssiSamples::Median() const {
  if (values_.empty()) return 0.0;
  std::vector<int> sorted = values_;
  std::sort(sorted.begin(), sorted.end());
  const size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) {
    return sorted[mid];
  }
  return (static_cast<double>(sorted[mid - 1]) + sorted[mid]) / 2.0;
}

double RssiSamples::StdDev() const {
  if (values_.empty()) return 0.0;
  const double mean = Mean();
  double sum_sq = 0.0;
  for (int v : values_) {
    const double d = v - mean;
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / static_cast<double>(values_.size()));
}

void SessionStats::IngestReport(const AdvReport& report,
                                uint64_t timestamp_us) {
  IngestSample(report, timestamp_us, report.rssi_dbm);
}

void SessionStats::IngestSample(const AdvReport& report, uint64_t timestamp_us,
                                int rssi_dbm) {
  DeviceStats& device = devices_[report.address];
  if (device.total_reports == 0) {
    device.first_seen_us = timestamp_us;
    device.last_seen_us = timestamp_us;
  } else {
    device.first_seen_us = std::min(device.first_seen_us, timestamp_us);
    device.last_seen_us = std::max(device.last_seen_us, timestamp_us);
  }
  ++device.total_reports;
  ++total_reports_;

  if (auto structures = ParseAdvData(report.adv_data); structures.ok()) {
    if (auto tx = ExtractTxPower(*structures); tx.ok() && tx->has_value()) {
      device.advertised_tx_power_dbm = **tx;
    }
  }

  const std::optional<int> channel = report.event_type.ble_channel();
  if (!channel.has_value()) {
    ++device.unknown_channel_count;
    ++unknown_channel_count_;
    return;
  }
  device.channels[*channel].Add(rssi_dbm);
}

const DeviceStats* SessionStats::Find(const DeviceAddress& address) const {
  auto it = devices_.find(address);
  return it == devices_.end() ? nullptr : &it->second;
}

RssiSamples SessionStats::Pooled(int channel) const {
  RssiSamples pooled;
  for (const auto& [address, device] : devices_) {
    auto it = device.channels.find(channel);
    if (it == device.channels.end()) continue;
    for (int v : it->second.values()) pooled.Add(v);
  }
  return pooled;
}

Status BlacklistParams::Validate() const {
  if (!(deviation_threshold_db >= 0.0)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "deviation threshold must be >= 0 dB");
  }
  return Status::Ok();
}

InterferenceReport DetectInterference(const SessionStats& stats,
                                      const BlacklistParams& params) {
  InterferenceReport report;
  std::vector<size_t> eligible;
  for (size_t i = 0; i < kAdvertisingChannels.size(); ++i) {
    ChannelEvidence& evidence = report.evidence[i];
    evidence.channel = kAdvertisingChannels[i];
    const RssiSamples pooled = stats.Pooled(evidence.channel);
    evidence.samples = pooled.count();
    if (!pooled.empty()) {
      evidence.pooled_median_dbm = pooled.Median();
    }
    evidence.eligible = !pooled.empty() &&
                        pooled.count() >= params.min_samples_per_channel;
    if (evidence.eligible) eligible.push_back(i);
  }
  if (eligible.size() < 2) {
    return report;
  }

  for (size_t i : eligible) {
    double best_other = -std::numeric_limits<double>::infinity();
    for (size_t j : eligible) {
      if (j != i) {
        best_other = std::max(best_other, *report.evidence[j].pooled_median_dbm);
      }
    }
    report.evidence[i].deficit_db =
        best_other - *report.evidence[i].pooled_median_dbm;
  }

  // Only the worst channel is a candidate; ties go to the lower channel.
  size_t worst = eligible.front();
  for (size_t i : eligible) {
    if (*report.evidence[i].pooled_median_dbm <
        *report.evidence[worst].pooled_median_dbm) {
      worst = i;
    }
  }
  if (*report.evidence[worst].deficit_db > params.deviation_threshold_db) {
    report.evidence[worst].blacklisted = true;
    report.blacklisted.insert(report.evidence[worst].channel);
  }
  return report;
}

Status PathLossParams::Validate() const {
  if (!(path_loss_exponent > 0.0) || !std::isfinite(path_loss_exponent)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "path loss exponent must be > 0");
  }
  if (!std::isfinite(reference_rssi_at_1m)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "reference RSSI must be finite");
  }
  return Status::Ok();
}

double EstimateDistance(double rssi_dbm, const PathLossParams& params) {
  return std::pow(10.0, (params.reference_rssi_at_1m - rssi_dbm) /
                            (10.0 * params.path_loss_exponent));
}

int AdvertisingChannelCenterMhz(int ble_channel) {
  switch (ble_channel) {
    case 37:
      return 2402;
    case 38:
      return 2426;
    case 39:
      return 2480;
    default:
      return 0;
  }
}

int WifiChannelCenterMhz(int wifi_channel) {
  if (wifi_channel == 14) return 2484;
  return 2412 + 5 * (wifi_channel - 1);
}

Result<std::set<int>> WifiOverlap(int wifi_channel) {
  if (wifi_channel < 1 || wifi_channel > 14) {
    return MakeError(ErrorCode::kOutOfRange,
                     "Wi-Fi channel must be 1..14, got " +
                         std::to_string(wifi_channel));
  }
  const int center = WifiChannelCenterMhz(wifi_channel);
  std::set<int> overlap;
  for (int channel : kAdvertisingChannels) {
    if (std::abs(AdvertisingChannelCenterMhz(channel) - center) <=
        kWifiHalfWidthMhz) {
      overlap.insert(channel);
    }
  }
  return overlap;
}

Result<DistanceEstimate> ChannelAwareEstimate(const SessionStats& stats,
                                              const DeviceAddress& address,
                                              const PathLossParams& params,
                                              const std::set<int>& blacklist) {
  const DeviceStats* device = stats.Find(address);
  DistanceEstimate estimate;
  double sum = 0.0;
  if (device != nullptr) {
    for (const auto& [channel, samples] : device->channels) {
      if (blacklist.contains(channel) || samples.empty()) continue;
      estimate.used_channels.insert(channel);
      estimate.sample_count += samples.count();
      for (int v : samples.values()) sum += v;
    }
  }
  if (estimate.sample_count == 0) {
    return MakeError(ErrorCode::kNoSamples,
                     "no samples for " + address.ToString() +
                         " on non-blacklisted channels");
  }
  estimate.mean_rssi_dbm = sum / static_cast<double>(estimate.sample_count);
  estimate.distance_m = EstimateDistance(estimate.mean_rssi_dbm, params);
  return estimate;
}

Status ScenarioSpec::Validate() const {
  if (auto status = path_loss.Validate(); !status.ok()) return status;
  if (!(true_distance_m > 0.0) || !std::isfinite(true_distance_m)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "true distance must be > 0 m");
  }
  if (!(noise_sigma_db >= 0.0) || !std::isfinite(noise_sigma_db)) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "noise sigma must be >= 0 dB");
  }
  if (advertiser_count == 0) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "advertiser count must be >= 1");
  }
  if (tx_power_dbm < -128 || tx_power_dbm > 127) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "tx power must fit a signed byte");
  }
  for (const auto& [channel, offset] : per_channel_offset_db) {
    if (AdvertisingChannelCenterMhz(channel) == 0) {
      return MakeError(ErrorCode::kInvalidArgument,
                       "offset given for non-advertising channel " +
                           std::to_string(channel));
    }
    if (!std::isfinite(offset)) {
      return MakeError(ErrorCode::kInvalidArgument, "offset must be finite");
    }
  }
  return Status::Ok();
}

GaussianSource::GaussianSource(uint64_t seed) : engine_(seed) {}

double GaussianSource::Next() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
  const double u2 = (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr uint64_t kSynthStartUs = 1'700'000'000'000'000;
constexpr uint64_t kSynthEventIntervalUs = 20'000;
constexpr uint64_t kSynthChannelHopUs = 500;

}  // namespace

std::vector<TimedReport> SynthTrace(const ScenarioSpec& spec) {
  GaussianSource rng(spec.seed);

  std::vector<DeviceAddress> addresses(spec.advertiser_count);
  for (DeviceAddress& address : addresses) {
    const uint64_t bits = rng.NextBits();
    for (size_t b = 0; b < 6; ++b) {
      address.bytes[b] = static_cast<uint8_t>(bits >> (8 * b));
    }
    address.bytes[0] |= 0xC0;  // random static address
  }

  const std::vector<AdStructure> ad = {
      {0x01, {0x06}},
      {kAdTypeTxPowerLevel, {static_cast<uint8_t>(spec.tx_power_dbm)}},
  };
  const Bytes adv_data = SerializeAdvData(ad);

  const double mean_rssi =
      spec.path_loss.reference_rssi_at_1m -
      10.0 * spec.path_loss.path_loss_exponent *
          std::log10(spec.true_distance_m);

  std::vector<TimedReport> trace;
  trace.reserve(size_t{spec.reports_per_channel} * spec.advertiser_count * 3);
  uint64_t event_index = 0;
  for (uint32_t rep = 0; rep < spec.reports_per_channel; ++rep) {
    for (const DeviceAddress& address : addresses) {
      for (uint8_t index = 0; index < 3; ++index) {
        const int channel = kAdvertisingChannels[index];
        double offset = 0.0;
        if (auto it = spec.per_channel_offset_db.find(channel);
            it != spec.per_channel_offset_db.end()) {
          offset = it->second;
        }
        const double noise = rng.Next() * spec.noise_sigma_db;
        const double rssi = std::clamp(
            std::round(mean_rssi + offset + noise), -128.0, 127.0);

        TimedReport timed;
        timed.timestamp_us = kSynthStartUs +
                             event_index * kSynthEventIntervalUs +
                             index * kSynthChannelHopUs;
        AdvReport& report = timed.report;
        // Arguments are in range, so composition cannot fail.
        report.event_type = DecodeEventType(
            ComposeEventType(static_cast<uint8_t>(PduType::kAdvNonconnInd),
                             index, 0, false)
                .value(),
            DecodeMode::kEnhanced);
        report.address_type = AddressType::kRandom;
        report.address = address;
        report.adv_data = adv_data;
        report.rssi_dbm = static_cast<int8_t>(rssi);
        trace.push_back(std::move(timed));
      }
      ++event_index;
    }
  }
  return trace;
}

}  // namespace advscope
