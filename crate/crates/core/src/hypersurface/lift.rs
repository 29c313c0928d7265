use crate::grid::{zip_map, Field};
use crate::lorentz;
use crate::surface::{form, lie_vectors_in};

use super::patch::SurfacePatch;
use super::shape::ShapeData;

/// Laguerre position vector `Y = ρ·γ₂` and Gauss map `η = γ₁ + r·γ₂`
/// with their first parameter derivatives (`[α][component]`).
#[derive(Debug, Clone)]
pub struct LaguerreLift {
    pub(crate) y: Field,
    pub(crate) dy: Field,
    pub(crate) eta: Field,
    pub(crate) deta: Field,
}

impl LaguerreLift {
    pub fn position(&self) -> &Field {
        &self.y
    }

    pub fn position_derivatives(&self) -> &Field {
        &self.dy
    }

    pub fn gauss_map(&self) -> &Field {
        &self.eta
    }

    pub fn gauss_map_derivatives(&self) -> &Field {
        &self.deta
    }
}

/// Builds `Y` and `η` in ℝ^{n+3}₂. Derivatives follow from the product
/// rule with the analytic patch derivatives and the gradients of `r`, `ρ`.
pub fn laguerre_lift(patch: &SurfacePatch, shape: &ShapeData) -> LaguerreLift {
    let grid = &patch.grid;
    let m = patch.params();
    let space = patch.space;
    let sig = patch.signature();
    let d = patch.x.comps();
    let len = patch.n + 3;
    let inputs = [
        &patch.x,
        &patch.xi,
        &patch.dx,
        &patch.dxi,
        &shape.mean_radius,
        &shape.rho,
        &shape.d_mean_radius,
        &shape.d_rho,
    ];
    let all = zip_map(grid, &inputs, 2 * len * (m + 1), |v, out| {
        let (x, xi, dx, dxi) = (v[0], v[1], v[2], v[3]);
        let (r, rho, dr, drho) = (v[4][0], v[5][0], v[6], v[7]);
        let (g1, g2) = lie_vectors_in(space, x, xi);
        let (y, rest) = out.split_at_mut(len);
        let (eta, rest) = rest.split_at_mut(len);
        let (dy, deta) = rest.split_at_mut(m * len);
        for c in 0..len {
            y[c] = rho * g2[c];
            eta[c] = g1[c] + r * g2[c];
        }
        for a in 0..m {
            let x_a = &dx[a * d..(a + 1) * d];
            let xi_a = &dxi[a * d..(a + 1) * d];
            let p1 = form(&sig, x, x_a);
            let p2 = form(&sig, x_a, xi) + form(&sig, x, xi_a);
            let mut dg1 = vec![p1, -p1];
            dg1.extend(space.tail(x_a, 0.0));
            let mut dg2 = vec![p2, -p2];
            dg2.extend(space.tail(xi_a, 0.0));
            for c in 0..len {
                dy[a * len + c] = drho[a] * g2[c] + rho * dg2[c];
                deta[a * len + c] = dg1[c] + dr[a] * g2[c] + r * dg2[c];
            }
        }
    });
    let part = |lo: usize, k: usize| {
        Field::from_fn(grid, k, all.region().clone(), |f, out| {
            out.copy_from_slice(&all.at(f)[lo..lo + k])
        })
    };
    LaguerreLift {
        y: part(0, len),
        eta: part(len, len),
        dy: part(2 * len, m * len),
        deta: part(2 * len + m * len, m * len),
    }
}

/// `g_αβ = ⟨∂_αY, ∂_βY⟩`, laid out `[α][β]`.
pub fn laguerre_metric(lift: &LaguerreLift, grid: &crate::grid::Grid) -> Field {
    let len = lift.y.comps();
    let m = lift.dy.comps() / len;
    zip_map(grid, &[&lift.dy], m * m, |v, out| {
        let dy = v[0];
        for a in 0..m {
            for b in 0..m {
                out[a * m + b] =
                    lorentz::inner(&dy[a * len..(a + 1) * len], &dy[b * len..(b + 1) * len]);
            }
        }
    })
}
