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

#include "advscope/cli.h"

#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "advscope/adv_analytics.h"
#include "advscope/capture_io.h"
#include "advscope/fw_sigscan.h"
#include "advscope/hci_codec.h"
#include "advscope/pipeline.h"
#include "advscope/render.h"

namespace advscope {

namespace {

enum class OutputFormat { kPretty, kStructured };

struct CaptureOptions {
  std::string input = "-";
  bool enhanced = false;
  bool strict = false;
  OutputFormat format = OutputFormat::kPretty;
  std::optional<CaptureFormat> input_format;
};

struct AnalyzeOptions {
  BlacklistParams blacklist;
  PathLossParams path_loss;
  std::optional<int> reference_tx_dbm;
};

struct ScanOptions {
  std::string image;
  std::string signatures;
  std::string patch_address;
  unsigned threads = 1;
  OutputFormat format = OutputFormat::kPretty;
};

struct SynthOptions {
  std::string output;
  ScenarioSpec spec;
  std::vector<std::string> offsets;
};

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

Result<Bytes> ReadAll(const std::string& path, std::istream& in) {
  if (path == "-") {
    return Bytes(std::istreambuf_iterator<char>(in),
                 std::istreambuf_iterator<char>());
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    return MakeError(ErrorCode::kIoError, "cannot open '" + path + "'");
  }
  Bytes bytes((std::istreambuf_iterator<char>(file)),
              std::istreambuf_iterator<char>());
  if (file.bad()) {
    return MakeError(ErrorCode::kIoError, "error reading '" + path + "'");
  }
  return bytes;
}

void ReportIssues(const std::vector<Error>& issues, std::ostream& err) {
  for (const Error& issue : issues) {
    err << "warning: skipped: " << issue.ToString() << "\n";
  }
}

struct LoadedCapture {
  CaptureReadResult capture;
  ExtractedReports extracted;
};

// Reads, detects and decodes a capture. Errors are fatal for the command.
Result<LoadedCapture> LoadCapture(const CaptureOptions& options, Io io) {
  auto bytes = ReadAll(options.input, io.in);
  if (!bytes.ok()) {
    return bytes.error();
  }
  LoadedCapture loaded;
  if (bytes->empty()) {
    loaded.capture.info.format = options.input_format.value_or(
        CaptureFormat::kBtsnoop);
    return loaded;
  }
  CaptureFormat format;
  if (options.input_format.has_value()) {
    format = *options.input_format;
  } else if (auto detected = DetectCaptureFormat(*bytes)) {
    format = *detected;
    if (format == CaptureFormat::kH4) {
      io.err << "note: no container header found, reading input as a raw H4 "
                "stream\n";
    }
  } else {
    return MakeError(ErrorCode::kBadMagic,
                     "unrecognised capture format (use --input-format)", 0);
  }
  auto capture = ReadCapture(*bytes, format, ReadOptions{options.strict});
  if (!capture.ok()) {
    return capture.error();
  }
  loaded.capture = std::move(*capture);
  loaded.extracted = ExtractAdvReports(
      loaded.capture.records,
      options.enhanced ? DecodeMode::kEnhanced : DecodeMode::kStandard);
  if (options.strict && !loaded.extracted.issues.empty()) {
    return loaded.extracted.issues.front();
  }
  return loaded;
}

size_t IssueCount(const LoadedCapture& loaded) {
  return loaded.capture.issues.size() + loaded.extracted.issues.size();
}

int Fatal(const Error& error, std::ostream& err) {
  err << "error: " << error.ToString() << "\n";
  return kExitFatal;
}

int CmdDecode(const CaptureOptions& options, Io io) {
  auto loaded = LoadCapture(options, io);
  if (!loaded.ok()) {
    return Fatal(loaded.error(), io.err);
  }
  for (const DecodedReport& decoded : loaded->extracted.reports) {
    if (options.format == OutputFormat::kStructured) {
      io.out << RenderReportJson(decoded).dump() << "\n";
    } else {
      io.out << RenderReportPretty(decoded);
    }
  }
  ReportIssues(loaded->capture.issues, io.err);
  ReportIssues(loaded->extracted.issues, io.err);
  return IssueCount(*loaded) == 0 ? kExitOk : kExitPartial;
}

int CmdAnalyze(const CaptureOptions& options, const AnalyzeOptions& analyze,
               Io io) {
  if (auto status = analyze.blacklist.Validate(); !status.ok()) {
    return Fatal(status.error(), io.err);
  }
  if (auto status = analyze.path_loss.Validate(); !status.ok()) {
    return Fatal(status.error(), io.err);
  }
  auto loaded = LoadCapture(options, io);
  if (!loaded.ok()) {
    return Fatal(loaded.error(), io.err);
  }
  ReportIssues(loaded->capture.issues, io.err);
  ReportIssues(loaded->extracted.issues, io.err);
  if (loaded->extracted.reports.empty()) {
    io.err << "note: no advertising reports in input\n";
    return kExitPartial;
  }

  SessionStats stats;
  for (const DecodedReport& decoded : loaded->extracted.reports) {
    int rssi = decoded.report.rssi_dbm;
    if (analyze.reference_tx_dbm.has_value()) {
      auto structures = ParseAdvData(decoded.report.adv_data);
      if (structures.ok()) {
        if (auto tx = ExtractTxPower(*structures); tx.ok() && tx->has_value()) {
          rssi = AdjustedRssi(rssi, **tx, *analyze.reference_tx_dbm);
        }
      }
    }
    stats.IngestSample(decoded.report, decoded.timestamp_us, rssi);
  }
  const InterferenceReport interference =
      DetectInterference(stats, analyze.blacklist);

  const bool structured = options.format == OutputFormat::kStructured;
  if (structured) {
    for (const auto& [address, device] : stats.devices()) {
      for (const auto& [channel, samples] : device.channels) {
        const ChannelEvidence& evidence =
            interference.evidence[static_cast<size_t>(channel - 37)];
        io.out << RenderCellJson(address, channel, samples, evidence,
                                 interference.blacklisted.contains(channel))
                      .dump()
               << "\n";
      }
    }
    io.out << RenderInterferenceJson(interference).dump() << "\n";
  } else {
    io.out << RenderStatsPretty(stats);
    io.out << RenderInterferencePretty(interference);
  }

  for (const auto& [address, device] : stats.devices()) {
    auto aware = ChannelAwareEstimate(stats, address, analyze.path_loss,
                                      interference.blacklisted);
    auto naive = ChannelAwareEstimate(stats, address, analyze.path_loss, {});
    if (structured) {
      nlohmann::json j;
      j["type"] = "distance";
      j["address"] = address.ToString();
      auto put = [&j](const char* key, const Result<DistanceEstimate>& e) {
        if (!e.ok()) {
          j[key] = nullptr;
          return;
        }
        j[key] = {{"distance_m", e->distance_m},
                  {"mean_rssi_dbm", e->mean_rssi_dbm},
                  {"channels", e->used_channels},
                  {"samples", e->sample_count}};
      };
      put("channel_aware", aware);
      put("naive", naive);
      io.out << j.dump() << "\n";
      continue;
    }
    auto describe = [](const Result<DistanceEstimate>& e) {
      if (!e.ok()) return std::string("n/a (no samples)");
      std::ostringstream s;
      s.setf(std::ios::fixed);
      s.precision(2);
      s << e->distance_m << " m (mean " << e->mean_rssi_dbm << " dBm, channels";
      for (int c : e->used_channels) s << ' ' << c;
      s << ", " << e->sample_count << " samples)";
      return s.str();
    };
    io.out << "distance " << address.ToString()
           << " channel-aware=" << describe(aware)
           << " naive=" << describe(naive) << "\n";
  }
  return IssueCount(*loaded) == 0 ? kExitOk : kExitPartial;
}

Result<uint32_t> ParseHexAddress(std::string_view text) {
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
  }
  uint32_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "bad patch address '" + std::string(text) + "'");
  }
  return value;
}

int CmdScan(const ScanOptions& options, Io io) {
  std::optional<PatchDescriptor> patch;
  if (!options.patch_address.empty()) {
    auto address = ParseHexAddress(options.patch_address);
    if (!address.ok()) {
      return Fatal(address.error(), io.err);
    }
    patch = MakeFlagPatch(*address);
  }
  std::vector<Signature> signatures = BuiltinSignatures();
  if (!options.signatures.empty()) {
    std::ifstream file(options.signatures);
    if (!file) {
      return Fatal(MakeError(ErrorCode::kIoError,
                             "cannot open '" + options.signatures + "'"),
                   io.err);
    }
    auto parsed = ParseSignatureList(file);
    if (!parsed.ok()) {
      return Fatal(parsed.error(), io.err);
    }
    signatures = std::move(*parsed);
  }
  auto image = ReadAll(options.image, io.in);
  if (!image.ok()) {
    return Fatal(image.error(), io.err);
  }
  auto matches = options.threads > 1
                     ? ScanSignaturesParallel(*image, signatures,
                                              options.threads)
                     : ScanSignatures(*image, signatures);
  if (!matches.ok()) {
    return Fatal(matches.error(), io.err);
  }
  const bool structured = options.format == OutputFormat::kStructured;
  for (const SignatureMatch& match : *matches) {
    io.out << (structured ? RenderMatchJson(match).dump()
                          : RenderMatchPretty(match))
           << "\n";
  }
  if (patch.has_value()) {
    if (structured) {
      char address[9];
      std::snprintf(address, sizeof(address), "%08X", patch->address);
      nlohmann::json j = {{"type", "patch"},
                          {"address", address},
                          {"bytes", ToHex(patch->bytes)},
                          {"comment", patch->comment}};
      io.out << j.dump() << "\n";
    } else {
      io.out << patch->ToString() << "\n";
    }
  }
  return matches->empty() ? kExitNoMatch : kExitOk;
}

Result<std::pair<int, double>> ParseOffset(const std::string& text) {
  const size_t eq = text.find('=');
  if (eq == std::string::npos) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "offset must look like CHANNEL=DB, got '" + text + "'");
  }
  try {
    size_t used = 0;
    const int channel = std::stoi(text.substr(0, eq), &used);
    if (used != eq) throw std::invalid_argument(text);
    const std::string db_text = text.substr(eq + 1);
    const double db = std::stod(db_text, &used);
    if (used != db_text.size()) throw std::invalid_argument(text);
    return std::make_pair(channel, db);
  } catch (const std::exception&) {
    return MakeError(ErrorCode::kInvalidArgument,
                     "offset must look like CHANNEL=DB, got '" + text + "'");
  }
}

int CmdSynth(SynthOptions options, Io io) {
  for (const std::string& text : options.offsets) {
    auto offset = ParseOffset(text);
    if (!offset.ok()) {
      return Fatal(offset.error(), io.err);
    }
    options.spec.per_channel_offset_db[offset->first] = offset->second;
  }
  if (auto status = options.spec.Validate(); !status.ok()) {
    return Fatal(status.error(), io.err);
  }
  const std::vector<TimedReport> trace = SynthTrace(options.spec);
  auto records = TraceToRecords(trace);
  if (!records.ok()) {
    return Fatal(records.error(), io.err);
  }
  Result<uint64_t> written = uint64_t{0};
  if (options.output == "-") {
    written = WriteBtsnoop(*records, io.out);
    io.out.flush();
  } else {
    std::ofstream file(options.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      return Fatal(MakeError(ErrorCode::kIoError,
                             "cannot create '" + options.output + "'"),
                   io.err);
    }
    written = WriteBtsnoop(*records, file);
    file.close();
    if (written.ok() && !file) {
      written = MakeError(ErrorCode::kSinkFailure,
                          "error writing '" + options.output + "'");
    }
  }
  if (!written.ok()) {
    return Fatal(written.error(), io.err);
  }
  io.err << "wrote " << *written << " advertising reports\n";
  return kExitOk;
}

const std::map<std::string, OutputFormat> kFormats = {
    {"pretty", OutputFormat::kPretty},
    {"structured", OutputFormat::kStructured},
};

const std::map<std::string, CaptureFormat> kInputFormats = {
    {"btsnoop", CaptureFormat::kBtsnoop},
    {"pklg", CaptureFormat::kPklg},
    {"h4", CaptureFormat::kH4},
};

void AddCaptureOptions(CLI::App* cmd, CaptureOptions& options) {
  cmd->add_option("input", options.input,
                  "Capture file (btsnoop, pklg or H4), '-' for stdin")
      ->capture_default_str();
  cmd->add_flag("--enhanced", options.enhanced,
                "Decode the vendor channel/antenna/scan-mode bits");
  cmd->add_flag("--strict", options.strict,
                "Abort on the first malformed record");
  cmd->add_option("--format", options.format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  cmd->add_option("--input-format", options.input_format,
                  "Override container auto-detection")
      ->transform(CLI::CheckedTransformer(kInputFormats, CLI::ignore_case));
}

void AddPathLossOptions(CLI::App* cmd, PathLossParams& params) {
  cmd->add_option("--ref-rssi", params.reference_rssi_at_1m,
                  "RSSI at 1 m in dBm")
      ->capture_default_str();
  cmd->add_option("--exponent", params.path_loss_exponent,
                  "Path loss exponent")
      ->capture_default_str();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"BLE advertising report decoder, RSSI analyzer and firmware "
               "signature scanner",
               "advscope"};
  app.require_subcommand(1);

  CaptureOptions decode_options;
  auto* decode = app.add_subcommand("decode", "Print advertising reports");
  AddCaptureOptions(decode, decode_options);

  CaptureOptions analyze_capture;
  AnalyzeOptions analyze_options;
  auto* analyze = app.add_subcommand(
      "analyze", "Per-channel RSSI statistics, blacklist and distance");
  AddCaptureOptions(analyze, analyze_capture);
  analyze->add_option("--threshold-db",
                      analyze_options.blacklist.deviation_threshold_db,
                      "Median deficit that blacklists a channel")
      ->capture_default_str();
  analyze->add_option("--min-samples",
                      analyze_options.blacklist.min_samples_per_channel,
                      "Samples a channel needs before it is compared")
      ->capture_default_str();
  AddPathLossOptions(analyze, analyze_options.path_loss);
  analyze->add_option("--ref-tx", analyze_options.reference_tx_dbm,
                      "Normalise RSSI to this TX power using advertised TX "
                      "Power Level");

  ScanOptions scan_options;
  auto* scan = app.add_subcommand("scan", "Search a firmware image for "
                                          "instruction signatures");
  scan->add_option("image", scan_options.image, "Firmware image, '-' for stdin")
      ->required();
  scan->add_option("--signatures", scan_options.signatures,
                   "Signature list (name<TAB>hex[<TAB>mask][<TAB>align])");
  scan->add_option("--patch-address", scan_options.patch_address,
                   "Emit the flag patch for this address (hex)");
  scan->add_option("--threads", scan_options.threads, "Scanner threads")
      ->check(CLI::Range(1u, 256u));
  scan->add_option("--format", scan_options.format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  SynthOptions synth_options;
  auto* synth = app.add_subcommand("synth", "Write a synthetic btsnoop trace");
  synth->add_option("-o,--output", synth_options.output,
                    "Output btsnoop file, '-' for stdout")
      ->required();
  synth->add_option("--seed", synth_options.spec.seed)->capture_default_str();
  synth->add_option("--advertisers", synth_options.spec.advertiser_count)
      ->capture_default_str();
  synth->add_option("--distance", synth_options.spec.true_distance_m,
                    "True distance in metres")
      ->capture_default_str();
  synth->add_option("--tx-power", synth_options.spec.tx_power_dbm,
                    "Advertised TX power in dBm")
      ->capture_default_str();
  synth->add_option("--noise-sigma", synth_options.spec.noise_sigma_db,
                    "Gaussian RSSI noise in dB")
      ->capture_default_str();
  synth->add_option("--reports-per-channel",
                    synth_options.spec.reports_per_channel)
      ->capture_default_str();
  synth->add_option("--offset", synth_options.offsets,
                    "Per-channel RSSI offset, e.g. 38=-20 (repeatable)");
  AddPathLossOptions(synth, synth_options.spec.path_loss);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitFatal;
  }

  Io io{in, out, err};
  if (decode->parsed()) return CmdDecode(decode_options, io);
  if (analyze->parsed()) {
    return CmdAnalyze(analyze_capture, analyze_options, io);
  }
  if (scan->parsed()) return CmdScan(scan_options, io);
  if (synth->parsed()) return CmdSynth(synth_options, io);
  return kExitFatal;
}

}  // namespace advscope
