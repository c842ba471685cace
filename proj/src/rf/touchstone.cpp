// SPDX-License-Identifier: Apache-2.0
#include "cryomux/rf/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "cryomux/error.hpp"
#include "cryomux/io/number_format.hpp"

namespace cryomux::rf {

namespace {

enum class DataFormat { RI, MA, DB };

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

Complex decode_pair(DataFormat fmt, double x, double y) {
    constexpr double deg = std::numbers::pi / 180.0;
    switch (fmt) {
        case DataFormat::RI: return {x, y};
        case DataFormat::MA: return std::polar(x, y * deg);
        case DataFormat::DB: return std::polar(std::pow(10.0, x / 20.0), y * deg);
    }
    return {x, y};
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& why) {
    std::ostringstream os;
    os << source << ":" << line << ": " << why;
    throw Error(ErrorCode::ParseError, os.str());
}

}  // namespace

void write_touchstone(std::ostream& os, const TwoPortNetwork& net, const std::string& comment) {
    if (!comment.empty()) {
        std::istringstream lines(comment);
        std::string line;
        while (std::getline(lines, line)) {
            os << "! " << line << '\n';
        }
    }
    os << "# HZ S RI R " << io::format_double(net.z0()) << '\n';
    for (std::size_t i = 0; i < net.size(); ++i) {
        const SMatrix& s = net.at(i);
        os << io::format_double(net.grid()[i]);
        for (const Complex& v : {s.s11, s.s21, s.s12, s.s22}) {
            os << ' ' << io::format_double(v.real()) << ' ' << io::format_double(v.imag());
        }
        os << '\n';
    }
}

void write_touchstone(const std::filesystem::path& path, const TwoPortNetwork& net,
                      const std::string& comment) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    write_touchstone(out, net, comment);
}

TwoPortNetwork read_touchstone(std::istream& is, const std::string& source_name) {
    double freq_scale = 1e9;  // Touchstone default unit is GHz
    DataFormat fmt = DataFormat::MA;
    double z0 = 50.0;
    bool seen_option = false;

    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (auto bang = line.find('!'); bang != std::string::npos) {
            line.erase(bang);
        }
        std::istringstream tokens(line);
        std::string first;
        if (!(tokens >> first)) {
            continue;
        }
        if (first[0] == '#') {
            if (seen_option) {
                parse_fail(source_name, line_no, "duplicate option line");
            }
            seen_option = true;
            std::vector<std::string> opts;
            if (first.size() > 1) {
                opts.push_back(upper(first.substr(1)));
            }
            std::string tok;
            while (tokens >> tok) {
                opts.push_back(upper(tok));
            }
            for (std::size_t k = 0; k < opts.size(); ++k) {
                const std::string& o = opts[k];
                if (o == "HZ") freq_scale = 1.0;
                else if (o == "KHZ") freq_scale = 1e3;
                else if (o == "MHZ") freq_scale = 1e6;
                else if (o == "GHZ") freq_scale = 1e9;
                else if (o == "RI") fmt = DataFormat::RI;
                else if (o == "MA") fmt = DataFormat::MA;
                else if (o == "DB") fmt = DataFormat::DB;
                else if (o == "S") continue;
                else if (o == "R") {
                    if (k + 1 >= opts.size()) {
                        parse_fail(source_name, line_no, "missing reference impedance after R");
                    }
                    const std::string& num = opts[++k];
                    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), z0);
                    if (ec != std::errc() || ptr != num.data() + num.size() || !(z0 > 0.0)) {
                        parse_fail(source_name, line_no, "bad reference impedance '" + num + "'");
                    }
                } else {
                    parse_fail(source_name, line_no, "unsupported option '" + o + "'");
                }
            }
            continue;
        }
        std::string tok = first;
        do {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                parse_fail(source_name, line_no, "bad number '" + tok + "'");
            }
            values.push_back(v);
        } while (tokens >> tok);
    }

    constexpr std::size_t kPerPoint = 9;
    if (values.size() % kPerPoint != 0) {
        parse_fail(source_name, line_no, "data is not a whole number of 2-port records");
    }
    const std::size_t n = values.size() / kPerPoint;
    std::vector<double> freqs(n);
    std::vector<SMatrix> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = &values[i * kPerPoint];
        freqs[i] = r[0] * freq_scale;
        s[i].s11 = decode_pair(fmt, r[1], r[2]);
        s[i].s21 = decode_pair(fmt, r[3], r[4]);
        s[i].s12 = decode_pair(fmt, r[5], r[6]);
        s[i].s22 = decode_pair(fmt, r[7], r[8]);
    }
    try {
        return TwoPortNetwork(FrequencyGrid(std::move(freqs)), std::move(s), z0);
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, source_name + ": " + e.what());
    }
}

TwoPortNetwork read_touchstone(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return read_touchstone(in, path.string());
}

}  // namespace cryomux::rf
