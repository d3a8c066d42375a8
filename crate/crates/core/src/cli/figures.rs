//! Data behind each published figure, one CSV plus a matplotlib stub per id.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::Format;
use super::output::{Cell, Table};
use crate::error::{Error, Result};
use crate::interferometer::{merit_thermal, phase_uncertainty, phase_uncertainty_tmst};
use crate::ngstate::{success_probability, NgParams};

pub const PHI: f64 = 0.01;
pub const KAPPA_VACUUM: f64 = 0.5;
pub const KAPPA_THERMAL: f64 = 1.0;
pub const SIX_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (2, 0), (1, 1), (2, 2)];
pub const MAP_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 0), (1, 1)];
pub const LEVELS_VACUUM: [f64; 6] = [0.0, 0.1, 0.5, 1.0, 2.0, 3.0];
pub const LEVELS_THERMAL: [f64; 6] = [0.0, 1.0, 5.0, 20.0, 50.0, 100.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig3a,
    Fig3b,
    Fig4,
    Fig5,
    Fig6,
    Fig7Left,
    Fig7Right,
    Fig8Left,
    Fig8Right,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7Left,
        FigureId::Fig7Right,
        FigureId::Fig8Left,
        FigureId::Fig8Right,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7Left => "fig7-left",
            FigureId::Fig7Right => "fig7-right",
            FigureId::Fig8Left => "fig8-left",
            FigureId::Fig8Right => "fig8-right",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| Error::Config(format!("unknown figure id {s:?}")))
    }
}

pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| if i + 1 == points { hi } else { lo + step * i as f64 }).collect()
}

fn ng_delta_phi(r_sq: f64, kappa: f64, tau: f64, (m, n): (usize, usize), phi: f64) -> f64 {
    NgParams::new(r_sq.tanh(), kappa, tau, m, n).and_then(|p| phase_uncertainty(&p, phi)).unwrap_or(f64::NAN)
}

fn pair_column(prefix: &str, (m, n): (usize, usize)) -> String {
    format!("{prefix}_m{m}_n{n}")
}

/// One x column followed by Δφ_TMST and Δφ of each pair.
fn curves(x_name: &str, xs: &[f64], row: impl Fn(f64) -> (f64, Vec<f64>) + Sync) -> Table {
    let mut cols = vec![x_name.to_owned(), "delta_phi_tmst_rad".to_owned()];
    cols.extend(SIX_PAIRS.iter().map(|&p| pair_column("delta_phi", p) + "_rad"));
    let rows: Vec<Vec<Cell>> = xs
        .par_iter()
        .map(|&x| {
            let (tmst, ng) = row(x);
            let mut r = vec![Cell::Float(x), Cell::Float(tmst)];
            r.extend(ng.into_iter().map(Cell::Float));
            r
        })
        .collect();
    Table { columns: cols, rows }
}

#[derive(Clone, Copy)]
enum MapQuantity {
    Probability,
    Merit,
}

/// Long-format (m, n, τ, r_sq, λ, value) map over the transmissivity-squeezing plane.
fn map(kappa: f64, what: MapQuantity) -> Table {
    let taus = linspace(0.02, 0.98, 49);
    let rs = linspace(0.02, 2.0, 100);
    let value = match (what, kappa == KAPPA_VACUUM) {
        (MapQuantity::Probability, _) => "probability",
        (MapQuantity::Merit, true) => "merit_vacuum_rad",
        (MapQuantity::Merit, false) => "merit_thermal_rad",
    };
    let mut points = Vec::new();
    for &pair in &MAP_PAIRS {
        for &tau in &taus {
            for &r in &rs {
                points.push((pair, tau, r));
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|&((m, n), tau, r)| {
            let p = NgParams::new(r.tanh(), kappa, tau, m, n);
            let v = p
                .and_then(|p| match what {
                    MapQuantity::Probability => success_probability(&p),
                    MapQuantity::Merit => merit_thermal(&p, PHI),
                })
                .unwrap_or(f64::NAN);
            vec![m.into(), n.into(), tau.into(), r.into(), r.tanh().into(), v.into()]
        })
        .collect();
    Table { columns: ["m", "n", "tau", "r_sq", "lambda", value].map(String::from).to_vec(), rows }
}

pub fn figure_table(id: FigureId) -> Table {
    match id {
        FigureId::Fig3a => {
            let rs = linspace(0.05, 4.0, 400);
            let rows = rs
                .iter()
                .map(|&r| {
                    let l = r.tanh();
                    vec![
                        r.into(),
                        phase_uncertainty_tmst(l, KAPPA_VACUUM, PHI).into(),
                        phase_uncertainty_tmst(l, KAPPA_THERMAL, PHI).into(),
                    ]
                })
                .collect();
            Table { columns: ["r_sq", "delta_phi_tmsv_rad", "delta_phi_tmst_rad"].map(String::from).to_vec(), rows }
        }
        FigureId::Fig3b => {
            let l = 1f64.tanh();
            let rows = linspace(-PI, PI, 801)
                .iter()
                .map(|&phi| {
                    vec![
                        phi.into(),
                        phase_uncertainty_tmst(l, KAPPA_VACUUM, phi).into(),
                        phase_uncertainty_tmst(l, KAPPA_THERMAL, phi).into(),
                    ]
                })
                .collect();
            Table { columns: ["phi_rad", "delta_phi_tmsv_rad", "delta_phi_tmst_rad"].map(String::from).to_vec(), rows }
        }
        FigureId::Fig4 => curves("r_sq", &linspace(0.02, 2.0, 199), |r| {
            let tmst = phase_uncertainty_tmst(r.tanh(), KAPPA_THERMAL, PHI);
            (tmst, SIX_PAIRS.iter().map(|&p| ng_delta_phi(r, KAPPA_THERMAL, 0.9, p, PHI)).collect())
        }),
        FigureId::Fig5 => curves("tau", &linspace(0.5, 0.999, 200), |tau| {
            let tmst = phase_uncertainty_tmst(1f64.tanh(), KAPPA_THERMAL, PHI);
            (tmst, SIX_PAIRS.iter().map(|&p| ng_delta_phi(1.0, KAPPA_THERMAL, tau, p, PHI)).collect())
        }),
        FigureId::Fig6 => curves("phi_rad", &linspace(0.001, 1.5, 300), |phi| {
            let tmst = phase_uncertainty_tmst(1f64.tanh(), KAPPA_THERMAL, phi);
            (tmst, SIX_PAIRS.iter().map(|&p| ng_delta_phi(1.0, KAPPA_THERMAL, 0.9, p, phi)).collect())
        }),
        FigureId::Fig7Left => map(KAPPA_VACUUM, MapQuantity::Probability),
        FigureId::Fig7Right => map(KAPPA_VACUUM, MapQuantity::Merit),
        FigureId::Fig8Left => map(KAPPA_THERMAL, MapQuantity::Probability),
        FigureId::Fig8Right => map(KAPPA_THERMAL, MapQuantity::Merit),
    }
}

fn plot_script(id: FigureId, csv_name: &str) -> String {
    let body = match id {
        FigureId::Fig3a | FigureId::Fig3b | FigureId::Fig4 | FigureId::Fig5 | FigureId::Fig6 => {
            "x = cols[0]\nfig, ax = plt.subplots()\nfor c in cols[1:]:\n    ax.plot(data[x], data[c], label=c)\n\
             ax.set_xlabel(x)\nax.set_ylabel(\"delta_phi_rad\")\nax.set_yscale(\"log\")\nax.legend()\n"
                .to_owned()
        }
        _ => {
            let levels = match id {
                FigureId::Fig7Right => format!("{LEVELS_VACUUM:?}"),
                FigureId::Fig8Right => format!("{LEVELS_THERMAL:?}"),
                _ => "None".to_owned(),
            };
            let y = if matches!(id, FigureId::Fig7Left | FigureId::Fig8Left) { "lambda" } else { "r_sq" };
            format!(
                "value = cols[-1]\nlevels = {levels}\npairs = sorted({{(int(m), int(n)) for m, n in zip(data[\"m\"], data[\"n\"])}})\n\
                 fig, axes = plt.subplots(1, len(pairs), figsize=(4 * len(pairs), 4))\n\
                 for ax, (m, n) in zip(axes, pairs):\n\
                 \x20   sel = (data[\"m\"] == m) & (data[\"n\"] == n)\n\
                 \x20   tau = np.unique(data[\"tau\"][sel])\n\
                 \x20   y = data[\"{y}\"][sel].reshape(len(tau), -1)\n\
                 \x20   z = data[value][sel].reshape(len(tau), -1)\n\
                 \x20   t = np.repeat(tau[:, None], y.shape[1], axis=1)\n\
                 \x20   if levels is None:\n\
                 \x20       cs = ax.contourf(t, y, z, 20)\n\
                 \x20       fig.colorbar(cs, ax=ax)\n\
                 \x20   else:\n\
                 \x20       cs = ax.contour(t, y, z, levels=levels)\n\
                 \x20       ax.clabel(cs)\n\
                 \x20   ax.set_title(f\"(m, n) = ({{m}}, {{n}})\")\n\
                 \x20   ax.set_xlabel(\"tau\")\n\
                 \x20   ax.set_ylabel(\"{y}\")\n"
            )
        }
    };
    format!(
        "import sys\n\nimport matplotlib.pyplot as plt\nimport numpy as np\n\n\
         data = np.genfromtxt(\"{csv_name}\", delimiter=\",\", names=True, missing_values=\"\", filling_values=np.nan)\n\
         cols = list(data.dtype.names)\n{body}\
         fig.tight_layout()\nfig.savefig(sys.argv[1] if len(sys.argv) > 1 else \"{}.png\")\n",
        id.name()
    )
}

/// Writes `<id>.csv` and `<id>.py` into `dir`.
pub fn figure_command(id: FigureId, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let csv = dir.join(format!("{}.csv", id.name()));
    let py = dir.join(format!("{}.py", id.name()));
    let table = figure_table(id);
    table.write(fs::File::create(&csv)?, Format::Csv)?;
    fs::write(&py, plot_script(id, &format!("{}.csv", id.name())))?;
    Ok(vec![csv, py])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(t: &Table, name: &str) -> Vec<f64> {
        let i = t.columns.iter().position(|c| c == name).unwrap();
        t.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Float(x) => x,
                _ => f64::NAN,
            })
            .collect()
    }

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(FigureId::parse(id.name()).unwrap(), id);
        }
        assert!(FigureId::parse("fig9").is_err());
    }

    #[test]
    fn fig3a_minima() {
        let t = figure_table(FigureId::Fig3a);
        let r = column(&t, "r_sq");
        for (name, expect) in [("delta_phi_tmsv_rad", 2.65), ("delta_phi_tmst_rad", 2.80)] {
            let d = column(&t, name);
            let i = (0..d.len()).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
            assert!((r[i] - expect).abs() < 0.05, "{name}: {}", r[i]);
        }
    }

    #[test]
    fn fig5_all_below_tmst() {
        let t = figure_table(FigureId::Fig5);
        let tmst = column(&t, "delta_phi_tmst_rad");
        for &p in &SIX_PAIRS {
            let d = column(&t, &(pair_column("delta_phi", p) + "_rad"));
            assert!(d.iter().zip(&tmst).all(|(a, b)| a < b), "{p:?}");
        }
    }

    #[test]
    fn map_shape() {
        let t = figure_table(FigureId::Fig8Left);
        assert_eq!(t.columns.last().unwrap(), "probability");
        assert_eq!(t.rows.len(), 3 * 49 * 100);
        assert!(column(&t, "probability").iter().all(|p| *p > 0.0 && *p <= 1.0));
    }
}
