#include "secsemcom/harness/plots.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "secsemcom/harness/run_record.hpp"

namespace secsemcom::harness {

using nlohmann::json;

namespace {

std::string fmt6(double x) {  // 6 significant digits
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct TableRow {
  std::string run_id, objective, channel, receiver;
  double snr_db, ssim, psnr_db, mean_intensity;
};

const char* kCurveColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

PlotOutputs emit_plots(const std::vector<std::filesystem::path>& record_files,
                       const std::filesystem::path& out_dir) {
  if (record_files.empty()) throw std::runtime_error("emit_plots: no run records given");

  std::vector<TableRow> table;
  for (const auto& file : record_files) {
    const auto rows = RunRecord::read_rows(file);
    std::string run_id = "run", objective = "?", chan = "?";
    for (const auto& r : rows) {
      const std::string type = r.value("type", "");
      if (type == "meta") {
        run_id = r.value("run_id", run_id);
        objective = r.value("objective", objective);
        chan = r.value("channel", chan);
      } else if (type == "eval") {
        table.push_back({run_id, r.value("objective", objective), r.value("channel", chan),
                         r.at("receiver").get<std::string>(), r.at("snr_db").get<double>(),
                         r.at("ssim").get<double>(), r.at("psnr_db").get<double>(),
                         r.at("mean_intensity").get<double>()});
      }
    }
  }
  if (table.empty()) throw std::runtime_error("emit_plots: records contain no eval rows");

  std::stable_sort(table.begin(), table.end(), [](const TableRow& a, const TableRow& b) {
    return std::tie(a.objective, a.receiver, a.run_id, a.snr_db) <
           std::tie(b.objective, b.receiver, b.run_id, b.snr_db);
  });

  std::filesystem::create_directories(out_dir);
  PlotOutputs out;
  out.csv = out_dir / "curves.csv";
  {
    std::ofstream csv(out.csv, std::ios::trunc);
    csv << "run_id,objective,channel,receiver,snr_db,ssim,psnr_db,mean_intensity\n";
    for (const auto& r : table)
      csv << r.run_id << "," << r.objective << "," << r.channel << "," << r.receiver << ","
          << fmt6(r.snr_db) << "," << fmt6(r.ssim) << "," << fmt6(r.psnr_db) << ","
          << fmt6(r.mean_intensity) << "\n";
  }

  // one curve per (objective, receiver)
  std::map<std::pair<std::string, std::string>, std::map<double, std::pair<double, int>>>
      curves;
  for (const auto& r : table) {
    auto& acc = curves[{r.objective, r.receiver}][r.snr_db];
    acc.first += r.ssim;
    acc.second += 1;
  }

  double x_min = 1e30, x_max = -1e30;
  for (const auto& [key, pts] : curves)
    for (const auto& [snr, acc] : pts) {
      x_min = std::min(x_min, snr);
      x_max = std::max(x_max, snr);
    }
  if (x_max <= x_min) x_max = x_min + 1.0;

  const int W = 640, H = 440, ml = 60, mr = 20, mt = 30, mb = 50;
  const auto sx = [&](double snr) {
    return ml + (snr - x_min) / (x_max - x_min) * (W - ml - mr);
  };
  const auto sy = [&](double ssim) { return mt + (1.0 - ssim) * (H - mt - mb); };

  out.svg = out_dir / "curves.svg";
  std::ofstream svg(out.svg, std::ios::trunc);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << W - mr << "\" y2=\""
      << sy(0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << ml << "\" y2=\"" << mt
      << "\" stroke=\"black\"/>\n";
  for (double g = 0.0; g <= 1.0001; g += 0.2)
    svg << "<text x=\"" << ml - 38 << "\" y=\"" << sy(g) + 4 << "\" font-size=\"11\">"
        << fmt6(g) << "</text>\n<line x1=\"" << ml - 4 << "\" y1=\"" << sy(g) << "\" x2=\""
        << ml << "\" y2=\"" << sy(g) << "\" stroke=\"black\"/>\n";
  for (double snr = std::ceil(x_min / 5.0) * 5.0; snr <= x_max + 1e-9; snr += 5.0)
    svg << "<text x=\"" << sx(snr) - 8 << "\" y=\"" << sy(0) + 18 << "\" font-size=\"11\">"
        << fmt6(snr) << "</text>\n<line x1=\"" << sx(snr) << "\" y1=\"" << sy(0) << "\" x2=\""
        << sx(snr) << "\" y2=\"" << sy(0) + 4 << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (W / 2 - 30) << "\" y=\"" << H - 12
      << "\" font-size=\"12\">SNR (dB)</text>\n";
  svg << "<text x=\"12\" y=\"" << (H / 2) << "\" font-size=\"12\" transform=\"rotate(-90 12 "
      << (H / 2) << ")\">SSIM</text>\n";

  int color_idx = 0, legend_y = mt + 6;
  for (const auto& [key, pts] : curves) {
    const std::string color = kCurveColors[color_idx++ % 8];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [snr, acc] : pts)
      svg << fmt6(sx(snr)) << "," << fmt6(sy(acc.first / acc.second)) << " ";
    svg << "\"/>\n";
    svg << "<text x=\"" << W - mr - 200 << "\" y=\"" << legend_y << "\" font-size=\"11\" fill=\""
        << color << "\">" << key.first << " / " << key.second << "</text>\n";
    legend_y += 14;
  }
  svg << "</svg>\n";
  return out;
}

}  // namespace secsemcom::harness
