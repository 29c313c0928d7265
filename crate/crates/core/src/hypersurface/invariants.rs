use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{try_zip_map, zip_map, FdOrder, Field, Grid};
use crate::lorentz::{inner, LorentzVector};
use crate::spheres::{classify_coord, Classified, ProjectivePoint, SphereElement};
use crate::surface::Space;

use super::lift::{laguerre_metric, LaguerreLift};
use super::patch::SurfacePatch;
use super::shape::ShapeData;

/// Moving frame `{Y, N, E_i(Y), η}`; `℘` is constant.
#[derive(Debug, Clone)]
pub struct LaguerreFrame {
    pub(crate) y: Field,
    pub(crate) normal: Field,
    pub(crate) tangents: Field,
    pub(crate) eta: Field,
}

impl LaguerreFrame {
    pub fn position(&self) -> &Field {
        &self.y
    }

    /// The null vector `N` paired with `Y`.
    pub fn conormal(&self) -> &Field {
        &self.normal
    }

    /// `E_i(Y)`, laid out `[i][component]`.
    pub fn tangents(&self) -> &Field {
        &self.tangents
    }

    pub fn gauss_map(&self) -> &Field {
        &self.eta
    }
}

/// Laguerre invariants on the grid. Tensors named `*_frame` are components
/// in the Gram–Schmidt frame of `g`; the rest are coordinate components.
#[derive(Debug, Clone)]
pub struct InvariantField {
    pub(crate) metric: Field,
    pub(crate) christoffel: Field,
    pub(crate) frame_coeffs: Field,
    pub(crate) b_frame: Field,
    pub(crate) l_frame: Field,
    pub(crate) c_frame: Field,
    pub(crate) shape_spectrum: Field,
    pub(crate) b_spectrum: Field,
    pub(crate) laplacian_y: Field,
    pub(crate) laplacian_eta: Field,
    pub(crate) laplacian_norm: Field,
    pub(crate) scalar_curvature: Field,
    pub(crate) div_c: Field,
    pub(crate) div_d: Field,
    pub(crate) lb: Field,
    pub(crate) residuals: BTreeMap<String, Field>,
}

impl InvariantField {
    /// `g_αβ`, laid out `[α][β]`.
    pub fn metric(&self) -> &Field {
        &self.metric
    }

    /// `Γ^γ_αβ`, laid out `[γ][α][β]`.
    pub fn christoffel(&self) -> &Field {
        &self.christoffel
    }

    /// Frame vectors `e_i = e_i^α ∂_α`, laid out `[i][α]`.
    pub fn frame_coefficients(&self) -> &Field {
        &self.frame_coeffs
    }

    pub fn b(&self) -> &Field {
        &self.b_frame
    }

    pub fn l(&self) -> &Field {
        &self.l_frame
    }

    pub fn c(&self) -> &Field {
        &self.c_frame
    }

    /// Eigenvalues of the Laguerre shape operator, descending.
    pub fn shape_spectrum(&self) -> &Field {
        &self.shape_spectrum
    }

    /// Eigenvalues of `B`, descending.
    pub fn b_spectrum(&self) -> &Field {
        &self.b_spectrum
    }

    pub fn laplacian_y(&self) -> &Field {
        &self.laplacian_y
    }

    pub fn laplacian_eta(&self) -> &Field {
        &self.laplacian_eta
    }

    /// `⟨ΔY, ΔY⟩`.
    pub fn laplacian_norm(&self) -> &Field {
        &self.laplacian_norm
    }

    pub fn scalar_curvature(&self) -> &Field {
        &self.scalar_curvature
    }

    /// `Σ C_{i,i}`.
    pub fn div_c(&self) -> &Field {
        &self.div_c
    }

    /// `Σ B_{ij,ij}`.
    pub fn div_d(&self) -> &Field {
        &self.div_d
    }

    /// `Σ L_ij B_ij`.
    pub fn lb(&self) -> &Field {
        &self.lb
    }

    /// Pointwise absolute residual of every checked identity.
    pub fn residuals(&self) -> &BTreeMap<String, Field> {
        &self.residuals
    }

    pub fn residual(&self, name: &str) -> Option<&Field> {
        self.residuals.get(name)
    }

    /// Largest value of each residual over its valid region.
    pub fn residual_summary(&self, grid: &Grid) -> BTreeMap<String, f64> {
        self.residuals
            .iter()
            .map(|(k, f)| (k.clone(), f.max_abs(grid)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantOptions {
    pub fd_order: FdOrder,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        InvariantOptions {
            fd_order: FdOrder::Fourth,
        }
    }
}

/// Applies the frame `e` (`[i][α]`) to every index of a rank-`k` tensor.
fn to_frame(e: &[f64], t: &[f64], m: usize, k: usize) -> Vec<f64> {
    let mut cur = t.to_vec();
    let mut next = vec![0.0; cur.len()];
    for mode in 0..k {
        let inner_sz = m.pow((k - 1 - mode) as u32);
        let outer = m.pow(mode as u32);
        next.iter_mut().for_each(|v| *v = 0.0);
        for o in 0..outer {
            for i in 0..m {
                for a in 0..m {
                    let w = e[i * m + a];
                    if w == 0.0 {
                        continue;
                    }
                    let src = (o * m + a) * inner_sz;
                    let dst = (o * m + i) * inner_sz;
                    for s in 0..inner_sz {
                        next[dst + s] += w * cur[src + s];
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b.abs()) })
}

fn slice(v: &[f64], i: usize, k: usize) -> &[f64] {
    &v[i * k..(i + 1) * k]
}

/// Computes the moving frame, the tensors `B, L, C` and all structural
/// residuals.
pub fn frame_and_tensors(
    patch: &SurfacePatch,
    shape: &ShapeData,
    lift: &LaguerreLift,
    opts: InvariantOptions,
) -> Result<(LaguerreFrame, InvariantField)> {
    let grid = &patch.grid;
    let ord = opts.fd_order;
    let n = patch.n;
    let m = n - 1;
    let mm = m * m;
    let len = n + 3;
    let nf = n as f64;
    let mf = m as f64;

    let metric = laguerre_metric(lift, grid);

    // ginv [m*m], √G, frame coefficients [m*m]
    let geo = try_zip_map(grid, &[&metric], 2 * mm + 1, |flat, v, out| {
        let g = DMatrix::from_row_slice(m, m, v[0]);
        let chol = g.clone().cholesky().ok_or_else(|| {
            Error::degenerate(grid.multi(flat), "Laguerre metric is not positive definite")
        })?;
        let ginv = chol.inverse();
        out[..mm].copy_from_slice(ginv.transpose().as_slice());
        out[mm] = chol.determinant().sqrt();
        // Gram–Schmidt on the coordinate vectors in axis order
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(m);
        for a in 0..m {
            let mut e = vec![0.0; m];
            e[a] = 1.0;
            for f in &frame {
                let p: f64 = (0..m).map(|b| g[(a, b)] * f[b]).sum();
                for b in 0..m {
                    e[b] -= p * f[b];
                }
            }
            let q: f64 = (0..m)
                .flat_map(|b| (0..m).map(move |c| (b, c)))
                .map(|(b, c)| e[b] * g[(b, c)] * e[c])
                .sum();
            let s = q.sqrt();
            e.iter_mut().for_each(|x| *x /= s);
            frame.push(e);
        }
        for (i, e) in frame.iter().enumerate() {
            out[mm + 1 + i * m..mm + 1 + (i + 1) * m].copy_from_slice(e);
        }
        Ok(())
    })?;
    let ginv = |v: &[f64]| -> Vec<f64> { v[..mm].to_vec() };
    let sqrt_g = |v: &[f64]| v[mm];
    let frame_coeffs = Field::from_fn(grid, mm, geo.region().clone(), |f, out| {
        out.copy_from_slice(&geo.at(f)[mm + 1..])
    });

    // Laplace–Beltrami of a vector-valued function with known gradient
    let laplacian = |grad: &Field, k: usize| -> Field {
        let flux = zip_map(grid, &[&geo, grad], m * k, |v, out| {
            let (gi, s) = (ginv(v[0]), sqrt_g(v[0]));
            for a in 0..m {
                for b in 0..m {
                    let w = s * gi[a * m + b];
                    for c in 0..k {
                        out[a * k + c] += w * v[1][b * k + c];
                    }
                }
            }
        });
        let div = flux.divergence(grid, ord);
        zip_map(grid, &[&div, &geo], k, |v, out| {
            let s = sqrt_g(v[1]);
            for c in 0..k {
                out[c] = v[0][c] / s;
            }
        })
    };

    let laplacian_y = laplacian(&lift.dy, len);
    let laplacian_eta = laplacian(&lift.deta, len);
    let laplacian_norm = zip_map(grid, &[&laplacian_y], 1, |v, out| {
        out[0] = inner(v[0], v[0]);
    });
    let normal = zip_map(grid, &[&laplacian_y, &lift.y], len, |v, out| {
        let q = inner(v[0], v[0]);
        for c in 0..len {
            out[c] = v[0][c] / mf + q * v[1][c] / (2.0 * mf * mf);
        }
    });
    let tangents = zip_map(grid, &[&frame_coeffs, &lift.dy], m * len, |v, out| {
        for i in 0..m {
            for a in 0..m {
                let w = v[0][i * m + a];
                for c in 0..len {
                    out[i * len + c] += w * v[1][a * len + c];
                }
            }
        }
    });

    // Christoffel symbols Γ^γ_αβ, layout [γ][α][β]
    let dmetric = metric.gradient(grid, ord);
    let christoffel = zip_map(grid, &[&geo, &dmetric], m * mm, |v, out| {
        let gi = ginv(v[0]);
        let dg = |d: usize, a: usize, b: usize| v[1][d * mm + a * m + b];
        for c in 0..m {
            for a in 0..m {
                for b in 0..m {
                    out[(c * m + a) * m + b] = 0.5
                        * (0..m)
                            .map(|d| gi[c * m + d] * (dg(a, d, b) + dg(b, d, a) - dg(d, a, b)))
                            .sum::<f64>();
                }
            }
        }
    });

    // covariant derivative of a coordinate 2-tensor, layout [α][β][γ]
    let covariant2 = |t: &Field| -> Field {
        let dt = t.gradient(grid, ord);
        zip_map(grid, &[&dt, &christoffel, t], m * mm, |v, out| {
            let (dt, gam, t) = (v[0], v[1], v[2]);
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        let mut s = dt[c * mm + a * m + b];
                        for d in 0..m {
                            s -= gam[(d * m + c) * m + a] * t[d * m + b]
                                + gam[(d * m + c) * m + b] * t[a * m + d];
                        }
                        out[(a * m + b) * m + c] = s;
                    }
                }
            }
        })
    };

    let b_coord = zip_map(grid, &[&lift.deta, &lift.dy], mm, |v, out| {
        for a in 0..m {
            for b in 0..m {
                out[a * m + b] = inner(slice(v[0], a, len), slice(v[1], b, len));
            }
        }
    });
    let c_coord = zip_map(grid, &[&lift.deta, &normal], m, |v, out| {
        for a in 0..m {
            out[a] = inner(slice(v[0], a, len), v[1]);
        }
    });
    let dnormal = normal.gradient(grid, ord);
    let l_coord = zip_map(grid, &[&dnormal, &lift.dy], mm, |v, out| {
        for a in 0..m {
            for b in 0..m {
                out[a * m + b] = inner(slice(v[0], a, len), slice(v[1], b, len));
            }
        }
    });
    let cov_b = covariant2(&b_coord);
    let cov_l = covariant2(&l_coord);

    // D_β = g^{αγ} ∇_γ B_αβ
    let d_coord = zip_map(grid, &[&cov_b, &geo], m, |v, out| {
        let gi = ginv(v[1]);
        for b in 0..m {
            for a in 0..m {
                for c in 0..m {
                    out[b] += gi[a * m + c] * v[0][(a * m + b) * m + c];
                }
            }
        }
    });
    let divergence = |covector: &Field| -> Field {
        let flux = zip_map(grid, &[&geo, covector], m, |v, out| {
            let (gi, s) = (ginv(v[0]), sqrt_g(v[0]));
            for a in 0..m {
                out[a] = s * (0..m).map(|b| gi[a * m + b] * v[1][b]).sum::<f64>();
            }
        });
        let div = flux.divergence(grid, ord);
        zip_map(grid, &[&div, &geo], 1, |v, out| out[0] = v[0][0] / sqrt_g(v[1]))
    };
    let div_c = divergence(&c_coord);
    let div_d = divergence(&d_coord);

    // ∇_β C_α = ∂_β C_α − Γ^γ_βα C_γ, layout [α][β]
    let dc = c_coord.gradient(grid, ord);
    let cov_c = zip_map(grid, &[&dc, &christoffel, &c_coord], mm, |v, out| {
        for a in 0..m {
            for b in 0..m {
                let mut s = v[0][b * m + a];
                for c in 0..m {
                    s -= v[1][(c * m + b) * m + a] * v[2][c];
                }
                out[a * m + b] = s;
            }
        }
    });

    // R_κσμν lowered, from R^ρ_σμν = ∂_μΓ^ρ_νσ − ∂_νΓ^ρ_μσ + Γ^ρ_μλΓ^λ_νσ − Γ^ρ_νλΓ^λ_μσ
    let dchristoffel = christoffel.gradient(grid, ord);
    let riemann = zip_map(grid, &[&dchristoffel, &christoffel, &metric], mm * mm, |v, out| {
        let (dg, gam, g) = (v[0], v[1], v[2]);
        let cube = m * mm;
        let gm = |r: usize, a: usize, b: usize| gam[(r * m + a) * m + b];
        let dgm = |d: usize, r: usize, a: usize, b: usize| dg[d * cube + (r * m + a) * m + b];
        let mut up = vec![0.0; mm * mm];
        for r in 0..m {
            for s in 0..m {
                for mu in 0..m {
                    for nu in 0..m {
                        let mut val = dgm(mu, r, nu, s) - dgm(nu, r, mu, s);
                        for l in 0..m {
                            val += gm(r, mu, l) * gm(l, nu, s) - gm(r, nu, l) * gm(l, mu, s);
                        }
                        up[((r * m + s) * m + mu) * m + nu] = val;
                    }
                }
            }
        }
        for k in 0..m {
            for rest in 0..cube {
                out[k * cube + rest] = (0..m).map(|r| g[k * m + r] * up[r * cube + rest]).sum();
            }
        }
    });

    // frame components
    let in_frame = |t: &Field, rank: usize| {
        zip_map(grid, &[&frame_coeffs, t], t.comps(), |v, out| {
            out.copy_from_slice(&to_frame(v[0], v[1], m, rank));
        })
    };
    let b_frame = in_frame(&b_coord, 2);
    let l_frame = in_frame(&l_coord, 2);
    let c_frame = in_frame(&c_coord, 1);
    let d_frame = in_frame(&d_coord, 1);
    let cov_b_frame = in_frame(&cov_b, 3);
    let cov_l_frame = in_frame(&cov_l, 3);
    let cov_c_frame = in_frame(&cov_c, 2);
    let riemann_frame = in_frame(&riemann, 4);

    let ricci = |r: &[f64], i: usize, k: usize| -> f64 {
        (0..m).map(|j| r[((j * m + i) * m + j) * m + k]).sum()
    };
    let scalar_curvature = zip_map(grid, &[&riemann_frame], 1, |v, out| {
        out[0] = (0..m).map(|i| ricci(v[0], i, i)).sum();
    });
    let lb = zip_map(grid, &[&l_frame, &b_frame], 1, |v, out| {
        out[0] = (0..mm).map(|k| v[0][k] * v[1][k]).sum();
    });

    let sorted_eigs = |t: &[f64]| -> Vec<f64> {
        let a = DMatrix::from_row_slice(m, m, t);
        let s = (&a + a.transpose()) * 0.5;
        let mut ev: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    };
    let b_spectrum = zip_map(grid, &[&b_frame], m, |v, out| out.copy_from_slice(&sorted_eigs(v[0])));
    let shape_spectrum = Field::from_fn(grid, m, shape.radii.region().clone(), |f, out| {
        out.copy_from_slice(&shape.shape_operator_spectrum(f))
    });

    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut residuals: BTreeMap<String, Field> = BTreeMap::new();
    let mut add = |name: &str, f: Field| {
        residuals.insert(name.to_string(), f);
    };
    let wp = LorentzVector::wp(n);
    let wp = wp.as_slice();

    // frame pairings
    let y = &lift.y;
    let eta = &lift.eta;
    add("pair_yy", zip_map(grid, &[y], 1, |v, o| o[0] = inner(v[0], v[0]).abs()));
    add("pair_nn", zip_map(grid, &[&normal], 1, |v, o| o[0] = inner(v[0], v[0]).abs()));
    add("pair_yn", zip_map(grid, &[y, &normal], 1, |v, o| o[0] = (inner(v[0], v[1]) + 1.0).abs()));
    add("pair_ee", zip_map(grid, &[&tangents], 1, |v, o| {
        o[0] = max_abs((0..mm).map(|k| {
            let (i, j) = (k / m, k % m);
            inner(slice(v[0], i, len), slice(v[0], j, len)) - delta(i, j)
        }))
    }));
    add("pair_ye", zip_map(grid, &[y, &tangents], 1, |v, o| {
        o[0] = max_abs((0..m).map(|i| inner(v[0], slice(v[1], i, len))))
    }));
    add("pair_ne", zip_map(grid, &[&normal, &tangents], 1, |v, o| {
        o[0] = max_abs((0..m).map(|i| inner(v[0], slice(v[1], i, len))))
    }));
    add("pair_etaeta", zip_map(grid, &[eta], 1, |v, o| o[0] = inner(v[0], v[0]).abs()));
    add("pair_etawp", zip_map(grid, &[eta], 1, |v, o| o[0] = (inner(v[0], wp) + 1.0).abs()));
    add("pair_etay", zip_map(grid, &[eta, y], 1, |v, o| o[0] = inner(v[0], v[1]).abs()));
    add("pair_etan", zip_map(grid, &[eta, &normal], 1, |v, o| o[0] = inner(v[0], v[1]).abs()));
    add("pair_etae", zip_map(grid, &[eta, &tangents], 1, |v, o| {
        o[0] = max_abs((0..m).map(|i| inner(v[0], slice(v[1], i, len))))
    }));
    add("pair_wpy", zip_map(grid, &[y], 1, |v, o| o[0] = inner(v[0], wp).abs()));
    add("pair_wpn", zip_map(grid, &[&normal], 1, |v, o| o[0] = inner(v[0], wp).abs()));

    // algebraic identities
    add("b_symmetry", zip_map(grid, &[&b_coord], 1, |v, o| {
        o[0] = max_abs((0..mm).map(|k| v[0][k] - v[0][(k % m) * m + k / m]))
    }));
    add("b_trace", zip_map(grid, &[&b_frame], 1, |v, o| {
        o[0] = (0..m).map(|i| v[0][i * m + i]).sum::<f64>().abs()
    }));
    add("b_norm", zip_map(grid, &[&b_frame], 1, |v, o| {
        o[0] = (v[0].iter().map(|x| x * x).sum::<f64>() - 1.0).abs()
    }));
    add("b_principal", zip_map(
        grid,
        &[&b_coord, &metric, &shape.directions, &shape.radii, &shape.mean_radius, &shape.rho],
        1,
        |v, o| {
            // B in the principal frame, rescaled to be orthonormal for g
            let (bc, g, dirs) = (v[0], v[1], v[2]);
            let (radii, r, rho) = (v[3], v[4][0], v[5][0]);
            let mut e = dirs.to_vec();
            for i in 0..m {
                let ei = &dirs[i * m..(i + 1) * m];
                let q: f64 = (0..mm).map(|k| ei[k / m] * g[k] * ei[k % m]).sum();
                for a in 0..m {
                    e[i * m + a] /= q.sqrt();
                }
            }
            let bp = to_frame(&e, bc, m, 2);
            o[0] = max_abs((0..mm).map(|k| {
                let (i, j) = (k / m, k % m);
                bp[k] - delta(i, j) * (r - radii[i]) / rho
            }));
        },
    ));
    add("l_symmetry", zip_map(grid, &[&l_coord, &metric], 1, |v, o| {
        let scale = max_abs(v[1].iter().copied()).max(1.0);
        o[0] = max_abs((0..mm).map(|k| v[0][k] - v[0][(k % m) * m + k / m])) / scale;
    }));
    add("l_trace", zip_map(grid, &[&l_frame, &laplacian_norm], 1, |v, o| {
        let tr: f64 = (0..m).map(|i| v[0][i * m + i]).sum();
        o[0] = (tr + v[1][0] / (2.0 * mf)).abs();
    }));
    add("metric_third_form", zip_map(grid, &[&metric, &patch.third, &shape.rho], 1, |v, o| {
        let rho2 = v[2][0] * v[2][0];
        let scale = max_abs(v[0].iter().copied());
        o[0] = max_abs((0..mm).map(|k| v[0][k] - rho2 * v[1][k])) / scale;
    }));
    add("weingarten", shape.weingarten.clone());

    // differential identities
    add("codazzi", zip_map(grid, &[&cov_b_frame, &c_frame], 1, |v, o| {
        let (cb, c) = (v[0], v[1]);
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let lhs = cb[(i * m + j) * m + k] - cb[(i * m + k) * m + j];
                    let rhs = c[j] * delta(i, k) - c[k] * delta(i, j);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        o[0] = worst;
    }));
    add("contracted_codazzi", zip_map(grid, &[&d_frame, &c_frame], 1, |v, o| {
        o[0] = max_abs((0..m).map(|j| v[0][j] - (nf - 2.0) * v[1][j]));
    }));
    add("c_curl", zip_map(grid, &[&cov_c_frame, &b_frame, &l_frame], 1, |v, o| {
        let (cc, b, l) = (v[0], v[1], v[2]);
        o[0] = max_abs((0..mm).map(|k| {
            let (i, j) = (k / m, k % m);
            let lhs = cc[i * m + j] - cc[j * m + i];
            let rhs: f64 = (0..m)
                .map(|q| b[i * m + q] * l[q * m + j] - b[j * m + q] * l[q * m + i])
                .sum();
            lhs - rhs
        }));
    }));
    add("l_codazzi", zip_map(grid, &[&cov_l_frame], 1, |v, o| {
        let cl = v[0];
        o[0] = max_abs((0..m * mm).map(|k| {
            let (i, j, q) = (k / mm, (k / m) % m, k % m);
            cl[(i * m + j) * m + q] - cl[(i * m + q) * m + j]
        }));
    }));
    add("gauss", zip_map(grid, &[&riemann_frame, &l_frame], 1, |v, o| {
        let (r, l) = (v[0], v[1]);
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for q in 0..m {
                        let rhs = l[j * m + k] * delta(i, q) + l[i * m + q] * delta(j, k)
                            - l[i * m + k] * delta(j, q)
                            - l[j * m + q] * delta(i, k);
                        worst = worst.max((r[((i * m + j) * m + k) * m + q] - rhs).abs());
                    }
                }
            }
        }
        o[0] = worst;
    }));
    add("ricci", zip_map(grid, &[&riemann_frame, &l_frame], 1, |v, o| {
        let (r, l) = (v[0], v[1]);
        let tr: f64 = (0..m).map(|i| l[i * m + i]).sum();
        o[0] = max_abs((0..mm).map(|k| {
            let (i, j) = (k / m, k % m);
            ricci(r, i, j) + (nf - 3.0) * l[k] + tr * delta(i, j)
        }));
    }));
    add("scalar_laplacian", zip_map(grid, &[&scalar_curvature, &laplacian_norm], 1, |v, o| {
        o[0] = (v[0][0] - (nf - 2.0) / (nf - 1.0) * v[1][0]).abs();
    }));
    add("scalar_trace", zip_map(grid, &[&scalar_curvature, &l_frame], 1, |v, o| {
        let tr: f64 = (0..m).map(|i| v[1][i * m + i]).sum();
        o[0] = (v[0][0] + 2.0 * (nf - 2.0) * tr).abs();
    }));
    if n >= 4 {
        add("l_from_curvature", zip_map(grid, &[&riemann_frame, &l_frame], 1, |v, o| {
            let (r, l) = (v[0], v[1]);
            let scalar: f64 = (0..m).map(|i| ricci(r, i, i)).sum();
            let tr = -scalar / (2.0 * (nf - 2.0));
            o[0] = max_abs((0..mm).map(|k| {
                let (i, j) = (k / m, k % m);
                let recovered = -(ricci(r, i, j) + tr * delta(i, j)) / (nf - 3.0);
                recovered - l[k]
            }));
        }));
    }

    // Δη = (Σ −C_{i,i} + L·B) Y + (n−3) Σ C_i E_i + ℘
    add("eta_laplacian_wp", zip_map(grid, &[&laplacian_eta, eta], 1, |v, o| {
        o[0] = (-inner(v[0], v[1]) - 1.0).abs();
    }));
    add("eta_laplacian_y", zip_map(grid, &[&laplacian_eta, &normal, &div_c, &lb], 1, |v, o| {
        let coeff = -inner(v[0], v[1]);
        o[0] = (coeff - (-v[2][0] + v[3][0])).abs();
    }));
    add("eta_laplacian_e", zip_map(grid, &[&laplacian_eta, &tangents, &c_frame], 1, |v, o| {
        o[0] = max_abs((0..m).map(|i| inner(v[0], slice(v[1], i, len)) - (nf - 3.0) * v[2][i]));
    }));

    if patch.space == Space::Euclidean {
        add("mean_sphere", try_zip_map(grid, &[eta, &patch.x, &patch.xi, &shape.mean_radius], 1, |flat, v, o| {
            let coord = LorentzVector::new(v[0].to_vec())
                .and_then(|l| ProjectivePoint::new(l, 1e-8))
                .map_err(|e| Error::degenerate(grid.multi(flat), e.to_string()))?;
            let r = v[3][0];
            o[0] = match classify_coord(&coord, 1e-8)? {
                Classified::Element(SphereElement::Sphere { center, radius }) => {
                    let dc = center
                        .iter()
                        .zip(v[1].iter().zip(v[2]))
                        .map(|(c, (x, xi))| (c - (x + r * xi)).abs());
                    max_abs(dc).max((radius + r).abs())
                }
                _ => f64::INFINITY,
            };
            Ok(())
        })?);
    }

    let frame = LaguerreFrame {
        y: lift.y.clone(),
        normal,
        tangents,
        eta: lift.eta.clone(),
    };
    let field = InvariantField {
        metric,
        christoffel,
        frame_coeffs,
        b_frame,
        l_frame,
        c_frame,
        shape_spectrum,
        b_spectrum,
        laplacian_y,
        laplacian_eta,
        laplacian_norm,
        scalar_curvature,
        div_c,
        div_d,
        lb,
        residuals,
    };
    Ok((frame, field))
}
