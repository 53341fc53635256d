// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nfri/encoder.hpp"

namespace nfri {

/// Event streams plus the model order they were recorded for.
struct EventRecord {
    std::vector<EventStream> streams;
    int model_order = 0;
};

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double x);
double parse_double(const std::string& text);

/// Writes `channel,t,p` rows (one per event, channels in record order) plus
/// a JSON sidecar with one entry per channel: channel, C, t0, f0, T, K.
/// Doubles survive a write/read cycle bit for bit.
void write_event_record(const std::filesystem::path& csv_path,
                        const std::filesystem::path& meta_path,
                        const EventRecord& record);

EventRecord read_event_record(const std::filesystem::path& csv_path,
                              const std::filesystem::path& meta_path);

}  // namespace nfri
