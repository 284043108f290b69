/*******************************************************************************
 * Copyright (c) 2026 the spinad developers.
 * All rights reserved.
 *
 * This source code and the accompanying materials are made available under
 * the terms of the Apache License 2.0 which accompanies this distribution.
 ******************************************************************************/
#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "spinad/relations.hpp"

namespace spinad {

/// Floats are printed with 17 significant digits, enough for a lossless
/// decimal round trip of IEEE doubles.
inline std::string format_float17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Minimal ordered JSON emitter. Keys keep insertion order and numbers go
/// through format_float17, neither of which generic JSON libraries guarantee.
class JsonWriter {
public:
    JsonWriter& begin_object() {
        separator();
        buf_ += '{';
        counts_.push_back(0);
        return *this;
    }
    JsonWriter& end_object() {
        buf_ += '}';
        counts_.pop_back();
        bump();
        return *this;
    }
    JsonWriter& begin_array() {
        separator();
        buf_ += '[';
        counts_.push_back(0);
        return *this;
    }
    JsonWriter& end_array() {
        buf_ += ']';
        counts_.pop_back();
        bump();
        return *this;
    }
    JsonWriter& key(std::string_view k) {
        separator();
        write_string(k);
        buf_ += ':';
        key_pending_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        separator();
        buf_ += format_float17(v);
        bump();
        return *this;
    }
    JsonWriter& value(long v) {
        separator();
        buf_ += std::to_string(v);
        bump();
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<long>(v)); }
    JsonWriter& value(std::size_t v) {
        separator();
        buf_ += std::to_string(v);
        bump();
        return *this;
    }
    JsonWriter& value(bool v) {
        separator();
        buf_ += v ? "true" : "false";
        bump();
        return *this;
    }
    JsonWriter& value(std::string_view v) {
        separator();
        write_string(v);
        bump();
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }

    const std::string& str() const { return buf_; }

private:
    void separator() {
        if (key_pending_) {
            key_pending_ = false;
            return;
        }
        if (!counts_.empty() && counts_.back() > 0)
            buf_ += ',';
    }
    void bump() {
        if (!counts_.empty())
            ++counts_.back();
    }
    void write_string(std::string_view s) {
        buf_ += '"';
        for (const char c : s) {
            switch (c) {
            case '"': buf_ += "\\\""; break;
            case '\\': buf_ += "\\\\"; break;
            case '\n': buf_ += "\\n"; break;
            case '\t': buf_ += "\\t"; break;
            case '\r': buf_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char esc[8];
                    std::snprintf(esc, sizeof(esc), "\\u%04x", c);
                    buf_ += esc;
                } else {
                    buf_ += c;
                }
            }
        }
        buf_ += '"';
    }

    std::string buf_;
    std::vector<int> counts_;
    bool key_pending_ = false;
};

/// Coefficient table serialization:
/// {"family": ..., "relation": [c1, c3, ...], "entries": [{"S": ..., "k": [k1..k2m]}, ...]}
inline std::string to_json(const ClosedFormCoefficients& cf, std::string_view family_label,
                           const PolynomialRelation& relation) {
    JsonWriter w;
    w.begin_object();
    w.key("family").value(family_label);
    w.key("relation").begin_array();
    for (const double c : relation.coefficients)
        w.value(c);
    w.end_array();
    w.key("entries").begin_array();
    for (const auto& e : cf.entries) {
        w.begin_object();
        w.key("S").value(e.frequency);
        w.key("k").begin_array();
        for (const double k : e.k)
            w.value(k);
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

} // namespace spinad
