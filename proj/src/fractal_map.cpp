#include "fbmseg/fractal_map.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fbmseg/parallel.hpp"

namespace fbmseg {

Padding parse_padding(const std::string& s) {
  if (s == "mirror") return Padding::mirror;
  if (s == "clamp") return Padding::clamp;
  throw ConfigError("unknown padding '" + s + "' (expected mirror or clamp)");
}

std::string to_string(Padding p) { return p == Padding::mirror ? "mirror" : "clamp"; }

void FractalMapConfig::validate() const {
  for (int w : window) {
    if (w < 3 || w % 2 == 0) throw ConfigError("window extents must be odd and >= 3");
  }
  if (scales < 2) throw ConfigError("scales must be >= 2");
  const int min_extent = std::min({window[0], window[1], window[2]});
  if (scales >= min_extent) throw ConfigError("scales must be smaller than the smallest window extent");
  if (euclidean_m < 1 || euclidean_m > 3) throw ConfigError("euclidean_m must be 1, 2 or 3");
  if (!(clamp.h_min >= 0.0 && clamp.h_min < clamp.h_max && clamp.h_max <= 1.0)) throw ConfigError("invalid Hurst clamp bounds");
}

std::string FractalMapConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "window=" << window[0] << ',' << window[1] << ',' << window[2] << " scales=" << scales << " pad=" << to_string(padding)
     << " h_min=" << clamp.h_min << " h_max=" << clamp.h_max << " m=" << euclidean_m;
  return os.str();
}

FractalMapConfig FractalMapConfig::parse(const std::string& described) {
  FractalMapConfig cfg;
  std::istringstream is(described);
  std::string tok;
  bool seen[6] = {};
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed map config token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    try {
      if (key == "window") {
        char c1, c2;
        std::istringstream vs(val);
        if (!(vs >> cfg.window[0] >> c1 >> cfg.window[1] >> c2 >> cfg.window[2]) || c1 != ',' || c2 != ',')
          throw ConfigError("malformed window");
        seen[0] = true;
      } else if (key == "scales") {
        cfg.scales = std::stoi(val);
        seen[1] = true;
      } else if (key == "pad") {
        cfg.padding = parse_padding(val);
        seen[2] = true;
      } else if (key == "h_min") {
        cfg.clamp.h_min = std::stod(val);
        seen[3] = true;
      } else if (key == "h_max") {
        cfg.clamp.h_max = std::stod(val);
        seen[4] = true;
      } else if (key == "m") {
        cfg.euclidean_m = std::stoi(val);
        seen[5] = true;
      } else {
        throw ConfigError("unknown map config key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw ConfigError("malformed map config value '" + tok + "'");
    }
  }
  for (bool s : seen)
    if (!s) throw ConfigError("incomplete map config '" + described + "'");
  cfg.validate();
  return cfg;
}

namespace {

/// Frame t of `vol` in double precision with `pad` voxels added on each side.
template <typename Scalar>
Grid3<double> padded_frame(const Grid4<Scalar>& vol, int t, const std::array<int, 3>& pad, Padding mode) {
  const auto& d = vol.dims();
  const Dims3 pd{d.nx + 2 * pad[0], d.ny + 2 * pad[1], d.nz + 2 * pad[2]};
  Grid3<double> out(pd);
  for (int z = 0; z < pd[2]; ++z) {
    const int sz = pad_index(z - pad[2], d.nz, mode);
    for (int y = 0; y < pd[1]; ++y) {
      const int sy = pad_index(y - pad[1], d.ny, mode);
      for (int x = 0; x < pd[0]; ++x) {
        out(x, y, z) = static_cast<double>(vol(pad_index(x - pad[0], d.nx, mode), sy, sz, t));
      }
    }
  }
  return out;
}

}  // namespace

template <typename Scalar>
Grid3<double> extract_window(const Grid4<Scalar>& vol, int x, int y, int z, int t, const std::array<int, 3>& extent,
                             Padding padding) {
  const auto& d = vol.dims();
  Grid3<double> w(Dims3{extent[0], extent[1], extent[2]});
  const int rx = extent[0] / 2, ry = extent[1] / 2, rz = extent[2] / 2;
  for (int k = 0; k < extent[2]; ++k)
    for (int j = 0; j < extent[1]; ++j)
      for (int i = 0; i < extent[0]; ++i)
        w(i, j, k) = static_cast<double>(vol(pad_index(x - rx + i, d.nx, padding), pad_index(y - ry + j, d.ny, padding),
                                             pad_index(z - rz + k, d.nz, padding), t));
  return w;
}

template <typename Scalar>
FractalMap<Scalar> compute_fractal_map(const Grid4<Scalar>& vol, const FractalMapConfig& cfg) {
  cfg.validate();
  const auto& d = vol.dims();
  const std::array<int, 3> r{cfg.window[0] / 2, cfg.window[1] / 2, cfg.window[2] / 2};
  const int scales = cfg.scales;
  const std::size_t n = d.frame_size();

  FractalMap<Scalar> map{Grid4<Scalar>::like(vol), Grid4<Scalar>::like(vol), cfg};

  std::vector<double> log_distance(static_cast<std::size_t>(scales));
  for (int s = 1; s <= scales; ++s) log_distance[static_cast<std::size_t>(s - 1)] = std::log(static_cast<double>(s));

  for (int t = 0; t < d.nt; ++t) {
    const Grid3<double> p = padded_frame(vol, t, r, cfg.padding);
    const Dims3 pd = p.dims();
    // totals[s-1][voxel] = sum of |differences| at offset s over the window.
    std::vector<std::vector<double>> totals(static_cast<std::size_t>(scales), std::vector<double>(n, 0.0));
    std::vector<double> counts(static_cast<std::size_t>(scales), 0.0);

    Grid3<double> diff(pd);
    Grid3<double> sx(Dims3{d.nx, pd[1], pd[2]});
    Grid3<double> sxy(Dims3{d.nx, d.ny, pd[2]});

    for (int s = 1; s <= scales; ++s) {
      auto& total = totals[static_cast<std::size_t>(s - 1)];
      for (int axis = 0; axis < 3; ++axis) {
        const int ox = axis == 0 ? s : 0, oy = axis == 1 ? s : 0, oz = axis == 2 ? s : 0;
        const int ex = cfg.window[0] - ox, ey = cfg.window[1] - oy, ez = cfg.window[2] - oz;
        counts[static_cast<std::size_t>(s - 1)] += static_cast<double>(ex) * ey * ez;

        parallel_for(static_cast<std::size_t>(pd[2] - oz), [&](std::size_t z0, std::size_t z1) {
          for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y + oy < pd[1]; ++y)
              for (int x = 0; x + ox < pd[0]; ++x) diff(x, y, z) = std::abs(p(x + ox, y + oy, z + oz) - p(x, y, z));
        });
        // Separable box sums anchored at the window's low corner.
        parallel_for(static_cast<std::size_t>(pd[2]), [&](std::size_t z0, std::size_t z1) {
          for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < pd[1]; ++y)
              for (int x = 0; x < d.nx; ++x) {
                if (z + oz >= pd[2] || y + oy >= pd[1]) {
                  sx(x, y, z) = 0.0;
                  continue;
                }
                double acc = 0.0;
                for (int i = 0; i < ex; ++i) acc += diff(x + i, y, z);
                sx(x, y, z) = acc;
              }
        });
        parallel_for(static_cast<std::size_t>(pd[2]), [&](std::size_t z0, std::size_t z1) {
          for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < d.ny; ++y)
              for (int x = 0; x < d.nx; ++x) {
                double acc = 0.0;
                for (int j = 0; j < ey; ++j) acc += sx(x, y + j, z);
                sxy(x, y, z) = acc;
              }
        });
        parallel_for(static_cast<std::size_t>(d.nz), [&](std::size_t z0, std::size_t z1) {
          for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < d.ny; ++y)
              for (int x = 0; x < d.nx; ++x) {
                double acc = 0.0;
                for (int k = 0; k < ez; ++k) acc += sxy(x, y, z + k);
                total[static_cast<std::size_t>(x) + static_cast<std::size_t>(d.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(d.ny) * static_cast<std::size_t>(z))] += acc;
              }
        });
      }
    }

    auto fd_out = map.fd.frame_span(t);
    auto rss_out = map.rss.frame_span(t);
    parallel_for(n, [&](std::size_t i0, std::size_t i1) {
      std::vector<double> mad(static_cast<std::size_t>(scales));
      for (std::size_t i = i0; i < i1; ++i) {
        for (std::size_t s = 0; s < mad.size(); ++s) mad[s] = totals[s][i] / counts[s];
        const VariogramFit fit = fit_hurst(log_distance, mad, cfg.clamp, SparsePolicy::smooth);
        fd_out[i] = static_cast<Scalar>(static_cast<double>(cfg.euclidean_m) + 1.0 - fit.h);
        rss_out[i] = static_cast<Scalar>(fit.rss);
      }
    });
  }
  return map;
}

template <typename Scalar>
MapStatistics map_statistics(const FractalMap<Scalar>& map, const Mask4& region, Label label) {
  if (region.dims() != map.fd.dims()) throw DomainError("map_statistics: region dims differ from map dims");
  MapStatistics st;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -std::numeric_limits<double>::infinity();
  const auto code = static_cast<std::uint8_t>(label);
  double sum = 0.0;
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (region[i] != code) continue;
    const double v = static_cast<double>(map.fd[i]);
    sum += v;
    st.min = std::min(st.min, v);
    st.max = std::max(st.max, v);
    ++st.count;
  }
  if (st.count == 0) throw DomainError("map_statistics: empty region");
  st.mean = sum / static_cast<double>(st.count);
  double ss = 0.0;
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (region[i] != code) continue;
    const double dv = static_cast<double>(map.fd[i]) - st.mean;
    ss += dv * dv;
  }
  st.variance = ss / static_cast<double>(st.count);
  return st;
}

template <typename Scalar>
MapStatistics map_statistics(const FractalMap<Scalar>& map) {
  return map_statistics(map, Mask4::like(map.fd, std::uint8_t{1}), Label::blood_pool);
}

template FractalMap<float> compute_fractal_map<float>(const Grid4<float>&, const FractalMapConfig&);
template FractalMap<double> compute_fractal_map<double>(const Grid4<double>&, const FractalMapConfig&);
template Grid3<double> extract_window<float>(const Grid4<float>&, int, int, int, int, const std::array<int, 3>&, Padding);
template Grid3<double> extract_window<double>(const Grid4<double>&, int, int, int, int, const std::array<int, 3>&, Padding);
template MapStatistics map_statistics<float>(const FractalMap<float>&, const Mask4&, Label);
template MapStatistics map_statistics<double>(const FractalMap<double>&, const Mask4&, Label);
template MapStatistics map_statistics<float>(const FractalMap<float>&);
template MapStatistics map_statistics<double>(const FractalMap<double>&);

}  // namespace fbmseg
