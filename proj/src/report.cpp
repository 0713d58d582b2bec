// This file is part of the reidmstc toolkit.
//
// Copyright 2026 the reidmstc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reidmstc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace reid {

namespace {

namespace fs = std::filesystem;

std::string format_double(const char* fmt, double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), fmt, v);
    return buffer;
}

/// Minimal 800x600 SVG line chart; one polyline over labeled axes.
void write_svg_plot(const std::string& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& x_label,
                    const std::string& y_label, const std::string& title) {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("write_svg_plot: bad series");

    constexpr double kWidth = 800, kHeight = 600, kMargin = 70;
    const double x_min = *std::min_element(xs.begin(), xs.end());
    const double x_max = *std::max_element(xs.begin(), xs.end());
    const double y_min = std::min(0.0, *std::min_element(ys.begin(), ys.end()));
    double y_max = *std::max_element(ys.begin(), ys.end());
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double x_span = x_max > x_min ? x_max - x_min : 1.0;

    auto px = [&](double x) {
        return kMargin + (x - x_min) / x_span * (kWidth - 2 * kMargin);
    };
    auto py = [&](double y) {
        return kHeight - kMargin - (y - y_min) / (y_max - y_min) * (kHeight - 2 * kMargin);
    };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n"
        << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
        << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" << title
        << "</text>\n";

    // Axes with min/max tick labels.
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
        << "<text x=\"400\" y=\"585\" text-anchor=\"middle\" font-size=\"14\">"
        << x_label << "</text>\n"
        << "<text x=\"20\" y=\"300\" text-anchor=\"middle\" font-size=\"14\" "
           "transform=\"rotate(-90 20 300)\">"
        << y_label << "</text>\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << format_double("%g", x_min)
        << "</text>\n"
        << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << format_double("%g", x_max)
        << "</text>\n"
        << "<text x=\"" << kMargin - 8 << "\" y=\"" << py(y_min) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << format_double("%g", y_min)
        << "</text>\n"
        << "<text x=\"" << kMargin - 8 << "\" y=\"" << py(y_max) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << format_double("%g", y_max)
        << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << format_double("%.2f", px(xs[i])) << ","
            << format_double("%.2f", py(ys[i])) << " ";
    out << "\"/>\n</svg>\n";
}

}  // namespace

void write_cmc_csv(const CmcCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << "rank,rate\n";
    for (std::size_t k = 0; k < curve.rates.size(); ++k)
        out << (k + 1) << "," << format_double("%.6f", curve.rates[k]) << "\n";
}

void write_convergence_csv(const std::vector<TraceRow>& trace,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << "iteration,objective,l1,l2,regularizer,primal_residual,dual_residual\n";
    for (const auto& row : trace)
        out << row.iteration << "," << format_double("%.12g", row.objective) << ","
            << format_double("%.12g", row.l1) << "," << format_double("%.12g", row.l2)
            << "," << format_double("%.12g", row.regularizer) << ","
            << format_double("%.12g", row.primal_residual) << ","
            << format_double("%.12g", row.dual_residual) << "\n";
}

void write_convergence_svg(const std::vector<TraceRow>& trace,
                           const std::string& path) {
    std::vector<double> iterations, objectives;
    for (const auto& row : trace) {
        iterations.push_back(static_cast<double>(row.iteration));
        objectives.push_back(row.objective);
    }
    write_svg_plot(path, iterations, objectives, "iteration", "objective",
                   "Training convergence");
}

ReportFiles emit_report(const CmcCurve& curve, const std::vector<TraceRow>& trace,
                        const std::string& out_dir) {
    if (curve.rates.empty()) throw std::invalid_argument("emit_report: empty curve");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw std::runtime_error("cannot create report directory: " + out_dir);

    ReportFiles files;
    const std::string cmc_csv = (fs::path(out_dir) / "cmc.csv").string();
    write_cmc_csv(curve, cmc_csv);
    files.written.push_back(cmc_csv);

    std::vector<double> ranks(curve.rates.size());
    for (std::size_t k = 0; k < ranks.size(); ++k) ranks[k] = static_cast<double>(k + 1);
    const std::string cmc_svg = (fs::path(out_dir) / "cmc.svg").string();
    write_svg_plot(cmc_svg, ranks, curve.rates, "rank", "matching rate", "CMC");
    files.written.push_back(cmc_svg);

    if (trace.empty()) {
        files.notes.push_back("convergence outputs omitted: empty loss trace");
        return files;
    }

    const std::string conv_csv = (fs::path(out_dir) / "convergence.csv").string();
    write_convergence_csv(trace, conv_csv);
    files.written.push_back(conv_csv);

    const std::string conv_svg = (fs::path(out_dir) / "convergence.svg").string();
    write_convergence_svg(trace, conv_svg);
    files.written.push_back(conv_svg);
    return files;
}

}  // namespace reid
