#include "voxcell/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "voxcell/error.hpp"
#include "voxcell/parallel.hpp"

namespace voxcell {
namespace {

double dot(const Real3& a, const Real3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Real3 sub(const Real3& a, const Real3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::kX;
  if (s == "y") return Axis::kY;
  if (s == "z") return Axis::kZ;
  throw Error("unknown axis '" + s + "'");
}

const char* to_string(Axis a) noexcept {
  switch (a) {
    case Axis::kX: return "x";
    case Axis::kY: return "y";
    case Axis::kZ: return "z";
  }
  return "?";
}

bool Primitive::contains(const Real3& x) const noexcept {
  switch (kind) {
    case Kind::kSphere: {
      const Real3 d = sub(x, a);
      return dot(d, d) < radius * radius;
    }
    case Kind::kBox:
      return x[0] >= a[0] && x[0] < b[0] && x[1] >= a[1] && x[1] < b[1] && x[2] >= a[2] &&
             x[2] < b[2];
    case Kind::kCapsule: {
      const Real3 ab = sub(b, a);
      const Real3 ax = sub(x, a);
      const double len2 = dot(ab, ab);
      const double t = len2 > 0.0 ? std::clamp(dot(ax, ab) / len2, 0.0, 1.0) : 0.0;
      const Real3 d{ax[0] - t * ab[0], ax[1] - t * ab[1], ax[2] - t * ab[2]};
      return dot(d, d) < radius * radius;
    }
  }
  return false;
}

void Primitive::bounds(Real3& lo, Real3& hi) const noexcept {
  switch (kind) {
    case Kind::kSphere:
      for (int d = 0; d < 3; ++d) {
        lo[d] = a[d] - radius;
        hi[d] = a[d] + radius;
      }
      break;
    case Kind::kBox:
      lo = a;
      hi = b;
      break;
    case Kind::kCapsule:
      for (int d = 0; d < 3; ++d) {
        lo[d] = std::min(a[d], b[d]) - radius;
        hi[d] = std::max(a[d], b[d]) + radius;
      }
      break;
  }
}

void ImplicitSolid::add_capsule(const Real3& a, const Real3& b, double radius) {
  primitives_.push_back({Primitive::Kind::kCapsule, a, b, radius});
}

void ImplicitSolid::add_sphere(const Real3& center, double radius) {
  primitives_.push_back({Primitive::Kind::kSphere, center, center, radius});
}

void ImplicitSolid::add_box(const Real3& lo, const Real3& hi) {
  primitives_.push_back({Primitive::Kind::kBox, lo, hi, 0.0});
}

bool ImplicitSolid::contains(const Real3& x) const noexcept {
  return std::any_of(primitives_.begin(), primitives_.end(),
                     [&](const Primitive& p) { return p.contains(x); });
}

ImplicitSolid octet_solid(const OctetCellSpec& spec) {
  const double a = spec.cell_size_mm;
  if (!(a > 0.0) || spec.d_horizontal_mm < 0.0 || spec.d_inclined_mm < 0.0 ||
      spec.d_horizontal_mm >= a || spec.d_inclined_mm >= a) {
    throw Error("invalid octet cell: need cell_size > 0 and 0 <= diameters < cell_size");
  }
  const int up = static_cast<int>(spec.build_axis);
  const double h = 0.5 * a;
  ImplicitSolid solid;
  auto add_strut = [&](const Real3& p, const Real3& q) {
    const bool horizontal = std::abs(q[up] - p[up]) < 1e-12 * a;
    const double d = horizontal ? spec.d_horizontal_mm : spec.d_inclined_mm;
    solid.add_capsule(p, q, 0.5 * d);
  };

  // Face centres and the corners of each face.
  std::vector<Real3> centres;
  for (int n = 0; n < 3; ++n) {
    for (int side = 0; side < 2; ++side) {
      Real3 c{h, h, h};
      c[n] = side * a;
      centres.push_back(c);
      const int t1 = (n + 1) % 3;
      const int t2 = (n + 2) % 3;
      for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
          Real3 corner{};
          corner[n] = side * a;
          corner[t1] = s1 * a;
          corner[t2] = s2 * a;
          add_strut(corner, c);
        }
      }
    }
  }
  // Octahedron: every pair of face centres that are not opposite.
  for (std::size_t i = 0; i < centres.size(); ++i) {
    for (std::size_t j = i + 1; j < centres.size(); ++j) {
      if (i / 2 == j / 2) continue;
      add_strut(centres[i], centres[j]);
    }
  }
  return solid;
}

VoxelGrid voxelize(const ImplicitSolid& solid, Int3 dims, Real3 spacing, int k,
                   double alpha_void) {
  if (k < 1) throw Error("supersample factor must be >= 1");
  VoxelGrid grid(dims, spacing, alpha_void);
  const auto& prims = solid.primitives();
  std::vector<Real3> lo(prims.size()), hi(prims.size());
  for (std::size_t p = 0; p < prims.size(); ++p) prims[p].bounds(lo[p], hi[p]);

  const int samples = k * k * k;
  std::vector<double> offsets(k);
  for (int s = 0; s < k; ++s) offsets[s] = (s + 0.5) / k;

  auto overlaps = [](double l0, double h0, double l1, double h1) { return l0 < h1 && l1 < h0; };

  parallel_for(static_cast<std::size_t>(dims[2]), [&](std::size_t kb, std::size_t ke, int) {
    std::vector<std::size_t> slab, row, cell;
    for (int kz = static_cast<int>(kb); kz < static_cast<int>(ke); ++kz) {
      const double z0 = kz * spacing[2], z1 = z0 + spacing[2];
      slab.clear();
      for (std::size_t p = 0; p < prims.size(); ++p) {
        if (overlaps(lo[p][2], hi[p][2], z0, z1)) slab.push_back(p);
      }
      if (slab.empty()) continue;
      for (int jy = 0; jy < dims[1]; ++jy) {
        const double y0 = jy * spacing[1], y1 = y0 + spacing[1];
        row.clear();
        for (auto p : slab) {
          if (overlaps(lo[p][1], hi[p][1], y0, y1)) row.push_back(p);
        }
        if (row.empty()) continue;
        for (int ix = 0; ix < dims[0]; ++ix) {
          const double x0 = ix * spacing[0], x1 = x0 + spacing[0];
          cell.clear();
          for (auto p : row) {
            if (overlaps(lo[p][0], hi[p][0], x0, x1)) cell.push_back(p);
          }
          if (cell.empty()) continue;
          int inside = 0;
          for (int sz = 0; sz < k; ++sz) {
            for (int sy = 0; sy < k; ++sy) {
              for (int sx = 0; sx < k; ++sx) {
                const Real3 x{x0 + offsets[sx] * spacing[0], y0 + offsets[sy] * spacing[1],
                              z0 + offsets[sz] * spacing[2]};
                for (auto p : cell) {
                  if (prims[p].contains(x)) {
                    ++inside;
                    break;
                  }
                }
              }
            }
          }
          if (2 * inside >= samples) grid.set_material(ix, jy, kz, true);
        }
      }
    }
  });
  return grid;
}

VoxelGrid tile(const VoxelGrid& cell, Int3 reps, std::size_t max_voxels) {
  Int3 dims{};
  std::size_t total = 1;
  for (int d = 0; d < 3; ++d) {
    if (reps[d] < 1) throw Error("tile repetitions must be >= 1");
    dims[d] = cell.dims()[d] * reps[d];
    total *= static_cast<std::size_t>(dims[d]);
    if (total > max_voxels) {
      throw Error("tiled grid exceeds the voxel limit of " + std::to_string(max_voxels));
    }
  }
  VoxelGrid out(dims, cell.spacing(), cell.alpha_void());
  const auto& c = cell.dims();
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        out.set_material(i, j, k, cell.is_material(i % c[0], j % c[1], k % c[2]));
      }
    }
  }
  return out;
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter, std::uint64_t stream) noexcept {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ counter);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

VoxelGrid apply_defects(const VoxelGrid& grid, const DefectSpec& spec) {
  if (spec.powder_blob_density_per_mm2 < 0.0 || spec.blob_radius_min_mm < 0.0 ||
      spec.blob_radius_max_mm < spec.blob_radius_min_mm || spec.strut_oversize_mm < 0.0) {
    throw Error("defect parameters must be non-negative with r_min <= r_max");
  }
  VoxelGrid out = grid;
  const bool blobs = spec.powder_blob_density_per_mm2 > 0.0 && spec.blob_radius_max_mm > 0.0;
  const bool oversize = spec.strut_oversize_mm > 0.0;
  if (!blobs && !oversize) return out;

  const auto& dims = grid.dims();
  const auto& s = grid.spacing();
  const int up = static_cast<int>(spec.build_axis);
  Int3 down{0, 0, 0};
  down[up] = -1;
  const double face_area = grid.voxel_volume() / s[up];

  // Downskin voxels: material with a void neighbour against the build direction.
  std::vector<std::size_t> downskin;
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        if (!grid.is_material(i, j, k)) continue;
        const int ni = i + down[0], nj = j + down[1], nk = k + down[2];
        if (grid.contains(ni, nj, nk) && !grid.is_material(ni, nj, nk)) {
          downskin.push_back(grid.index(i, j, k));
        }
      }
    }
  }

  auto fill_ball = [&](const Real3& c, double r, bool lower_half_only, const Real3& origin) {
    Int3 lo{}, hi{};
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::max(0, static_cast<int>(std::floor((c[d] - r) / s[d])));
      hi[d] = std::min(dims[d] - 1, static_cast<int>(std::floor((c[d] + r) / s[d])));
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const Real3 x{(i + 0.5) * s[0], (j + 0.5) * s[1], (k + 0.5) * s[2]};
          const Real3 dx = sub(x, c);
          if (dot(dx, dx) > r * r) continue;
          if (lower_half_only && !(x[up] < origin[up])) continue;
          out.set_material(i, j, k, true);
        }
      }
    }
  };

  for (const std::size_t n : downskin) {
    const int i = static_cast<int>(n % dims[0]);
    const int j = static_cast<int>((n / dims[0]) % dims[1]);
    const int k = static_cast<int>(n / (static_cast<std::size_t>(dims[0]) * dims[1]));
    const Real3 centre{(i + 0.5) * s[0], (j + 0.5) * s[1], (k + 0.5) * s[2]};
    if (oversize) fill_ball(centre, spec.strut_oversize_mm, true, centre);
    if (blobs) {
      const double p = std::min(1.0, spec.powder_blob_density_per_mm2 * face_area);
      if (counter_uniform(spec.rng_seed, n, 0) < p) {
        const double r = spec.blob_radius_min_mm +
                         counter_uniform(spec.rng_seed, n, 1) *
                             (spec.blob_radius_max_mm - spec.blob_radius_min_mm);
        Real3 c = centre;
        c[up] -= 0.5 * s[up];  // face centre
        Real3 blob = c;
        // Centre sits below the face so the particle is attached.
        blob[up] -= 0.5 * r;
        // Lateral jitter within the face.
        for (int d = 0; d < 3; ++d) {
          if (d == up) continue;
          blob[d] += (counter_uniform(spec.rng_seed, n, 2 + d) - 0.5) * s[d];
        }
        fill_ball(blob, r, false, c);
      }
    }
  }
  return out;
}

}  // namespace voxcell
