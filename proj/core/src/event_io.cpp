// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 NeuroFRI Project Contributors

#include "nfri/event_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "nfri/errors.hpp"

namespace nfri {
namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(line);
    while (std::getline(row, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc()) throw Error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) {
        throw Error("parse_double: malformed number '" + text + "'");
    }
    return x;
}

void write_event_record(const std::filesystem::path& csv_path,
                        const std::filesystem::path& meta_path,
                        const EventRecord& record) {
    std::ofstream csv = open_output(csv_path);
    csv << "channel,t,p\n";
    for (const EventStream& stream : record.streams) {
        for (const Event& e : stream.events) {
            csv << stream.channel << ',' << format_double(e.time) << ','
                << e.polarity << '\n';
        }
    }
    if (!csv) throw Error("error writing " + csv_path.string());

    json channels = json::array();
    for (const EventStream& stream : record.streams) {
        channels.push_back({{"channel", stream.channel},
                            {"C", stream.threshold},
                            {"t0", stream.start},
                            {"f0", stream.start_value},
                            {"T", stream.period},
                            {"K", record.model_order}});
    }
    std::ofstream meta = open_output(meta_path);
    meta << json{{"channels", channels}}.dump(2) << '\n';
    if (!meta) throw Error("error writing " + meta_path.string());
}

EventRecord read_event_record(const std::filesystem::path& csv_path,
                              const std::filesystem::path& meta_path) {
    json meta;
    try {
        std::ifstream in = open_input(meta_path);
        meta = json::parse(in);
    } catch (const json::exception& e) {
        throw Error("malformed metadata " + meta_path.string() + ": " + e.what());
    }
    if (!meta.contains("channels") || !meta["channels"].is_array() ||
        meta["channels"].empty()) {
        throw Error("metadata " + meta_path.string() + " lacks a channels array");
    }

    EventRecord record;
    std::map<int, std::size_t> slot;
    try {
        for (const json& ch : meta["channels"]) {
            EventStream stream;
            stream.channel = ch.at("channel").get<int>();
            stream.threshold = ch.at("C").get<double>();
            stream.start = ch.at("t0").get<double>();
            stream.start_value = ch.at("f0").get<double>();
            stream.period = ch.at("T").get<double>();
            const int order = ch.at("K").get<int>();
            if (record.streams.empty()) {
                record.model_order = order;
            } else if (order != record.model_order) {
                throw Error("metadata channels disagree on model order");
            }
            if (slot.count(stream.channel)) {
                throw Error("metadata lists channel " +
                            std::to_string(stream.channel) + " twice");
            }
            slot[stream.channel] = record.streams.size();
            record.streams.push_back(std::move(stream));
        }
    } catch (const json::exception& e) {
        throw Error("malformed metadata " + meta_path.string() + ": " + e.what());
    }

    std::ifstream csv = open_input(csv_path);
    std::string line;
    if (!std::getline(csv, line) || line != "channel,t,p") {
        throw Error("events file " + csv_path.string() + " lacks channel,t,p header");
    }
    std::size_t row = 1;
    while (std::getline(csv, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_row(line);
        if (fields.size() != 3) {
            throw Error("events row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected 3");
        }
        Event e;
        int channel = 0;
        try {
            channel = std::stoi(fields[0]);
            e.time = parse_double(fields[1]);
            e.polarity = std::stoi(fields[2]);
        } catch (const std::exception& ex) {
            throw Error("events row " + std::to_string(row) + ": " + ex.what());
        }
        if (e.polarity != 1 && e.polarity != -1) {
            throw Error("events row " + std::to_string(row) + ": polarity must be +-1");
        }
        const auto it = slot.find(channel);
        if (it == slot.end()) {
            throw Error("events row " + std::to_string(row) + ": channel " +
                        std::to_string(channel) + " missing from metadata");
        }
        EventStream& stream = record.streams[it->second];
        if (!stream.events.empty() && e.time <= stream.events.back().time) {
            throw Error("events row " + std::to_string(row) +
                        ": trigger times must increase within a channel");
        }
        stream.events.push_back(e);
    }
    return record;
}

}  // namespace nfri
