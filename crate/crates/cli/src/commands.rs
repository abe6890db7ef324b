//! One function per subcommand. Each returns an in-memory artifact; writing
//! is left to the caller.

use crate::config::{Command, RunConfig};
use crate::gate;
use crate::output::{Cell, Table};
use polyharm::annular_models::AnnularModel;
use polyharm::extension_engine::{log_jets, AnnularExtension, CoefficientRecord, ExtensionOptions};
use polyharm::operator_core::{
    convergence_radius, root_test_rate, taylor_expand, ClosedForm, ExponentSequence, FundamentalFunction, Strategy,
};
use polyharm::spherical::{flc, lie_point, on_branch_cut, ProjectionGrid};
use polyharm::{Error, Result, C64};
use rayon::prelude::*;
use serde_json::Value;

pub enum Artifact {
    Table(Table),
    /// Gate report and whether every criterion passed.
    Report(Value, Vec<gate::Criterion>, bool),
}

/// Optional thread pool; `None` evaluates grids serially.
pub struct Exec {
    pool: Option<rayon::ThreadPool>,
}

impl Exec {
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let pool = match threads {
            Some(n) if n > 1 => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
            ),
            _ => None,
        };
        Ok(Self { pool })
    }

    /// `f` over `items`, results in input order.
    fn map<T: Sync, U: Send, F: Fn(&T) -> Result<U> + Sync>(&self, items: &[T], f: F) -> Result<Vec<U>> {
        match &self.pool {
            Some(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            None => items.iter().map(f).collect(),
        }
    }
}

fn nan() -> C64 {
    C64::new(f64::NAN, f64::NAN)
}

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

fn model(cfg: &RunConfig) -> Result<AnnularModel> {
    let def = cfg
        .model
        .as_ref()
        .ok_or_else(|| Error::Config("no model in configuration".into()))?;
    AnnularModel::from_definition(def)
}

fn grid_points(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect()
}

pub fn run(command: Command, cfg: &RunConfig, exec: &Exec) -> Result<Artifact> {
    match command {
        Command::Fundamental => fundamental(cfg, exec),
        Command::Expand => expand(cfg),
        Command::Radius => radius(cfg),
        Command::Flc => flc_table(cfg, exec),
        Command::Jet => jet(cfg),
        Command::Extend => extend(cfg, exec),
        Command::Verify => {
            let (criteria, witnesses) = gate::evaluate();
            let ok = criteria.iter().all(|c| c.passed);
            Ok(Artifact::Report(gate::report_json(&criteria, &witnesses), criteria, ok))
        }
    }
}

fn fundamental(cfg: &RunConfig, exec: &Exec) -> Result<Artifact> {
    let p = cfg.fundamental.as_ref().ok_or_else(|| Error::Config("missing fundamental".into()))?;
    let seq = ExponentSequence::from_rule(p.exponents.clone())?;
    let phi = FundamentalFunction::from_sequence(&seq, p.n)?;
    let closed = phi.closed_form() != ClosedForm::Unavailable;
    let points = grid_points(&p.re.values(), &p.im.values());
    let values = exec.map(&points, |&(x, y)| {
        let z = C64::new(x, y);
        let s = phi.eval_with(z, Strategy::Series)?;
        let c = phi.eval_with(z, Strategy::Contour)?;
        let f = if closed { phi.eval_with(z, Strategy::ClosedForm)? } else { nan() };
        let mut dev = (s - c).norm();
        if closed {
            dev = dev.max((s - f).norm()).max((c - f).norm());
        }
        Ok([s, c, f, C64::new(dev, 0.0)])
    })?;
    let mut t = Table::new(
        "fundamental",
        &["re", "im", "series_re", "series_im", "contour_re", "contour_im", "closed_re", "closed_im", "max_dev"],
    );
    let kind = match phi.closed_form() {
        ClosedForm::Polynomial => "polynomial",
        ClosedForm::Equidistant { .. } => "equidistant",
        ClosedForm::DistinctRoots => "distinct_roots",
        ClosedForm::RepeatedRoots => "repeated_roots",
        ClosedForm::Unavailable => "unavailable",
    };
    t.param("n", p.n).param("closed_form", kind);
    for ((x, y), [s, c, f, dev]) in points.iter().zip(values) {
        t.push(vec![
            Cell::from(*x),
            Cell::from(*y),
            s.re.into(),
            s.im.into(),
            c.re.into(),
            c.im.into(),
            f.re.into(),
            f.im.into(),
            dev.re.into(),
        ]);
    }
    Ok(Artifact::Table(t))
}

fn expand(cfg: &RunConfig) -> Result<Artifact> {
    let p = cfg.expand.as_ref().ok_or_else(|| Error::Config("missing expand".into()))?;
    let seq = ExponentSequence::from_rule(p.exponents.clone())?;
    let s = taylor_expand(&p.function, &seq, p.x0, p.n_max)?;
    let mut t = Table::new("expand", &["n", "lambda_re", "lambda_im", "a_re", "a_im"]);
    t.param("x0", p.x0)
        .param("n_max", p.n_max)
        .param("r_star", opt(s.r_star))
        .param("radius", opt(s.radius))
        .param("sigma", opt(s.sigma));
    for (n, a) in s.coeffs.iter().enumerate() {
        let l = seq.get(n)?;
        t.push(vec![n.into(), l.re.into(), l.im.into(), a.re.into(), a.im.into()]);
    }
    Ok(Artifact::Table(t))
}

fn radius(cfg: &RunConfig) -> Result<Artifact> {
    let p = cfg.radius.as_ref().ok_or_else(|| Error::Config("missing radius".into()))?;
    let rate = root_test_rate(&p.coeffs)?;
    let r = convergence_radius(&p.coeffs, p.beta)?;
    let mut t = Table::new("radius", &["count", "beta", "rate", "radius"]);
    t.push(vec![p.coeffs.len().into(), p.beta.into(), rate.into(), r.into()]);
    Ok(Artifact::Table(t))
}

fn flc_table(cfg: &RunConfig, exec: &Exec) -> Result<Artifact> {
    let p = cfg.flc.as_ref().ok_or_else(|| Error::Config("missing flc".into()))?;
    let m = model(cfg)?;
    let grid = ProjectionGrid::new(m.d, p.k, cfg.numeric.quad_nodes.max(p.k))?;
    grid.position(p.k, p.l)?;
    let profile = m.radial_profile(p.k, p.l);
    let rs = p.r.values();
    let values = exec.map(&rs, |&r| {
        let v = flc(|x| m.value(x).unwrap_or_else(|_| nan()), &grid, p.k, p.l, r, (m.r0, m.r1))?;
        Ok((v, profile.as_ref().map_or_else(nan, |pr| pr.value(r))))
    })?;
    let mut t = Table::new("flc", &["r", "re", "im", "profile_re", "profile_im"]);
    t.param("k", p.k)
        .param("l", p.l)
        .param("d", m.d)
        .param("quad_nodes", cfg.numeric.quad_nodes.max(p.k));
    for (r, (v, pr)) in rs.iter().zip(values) {
        t.push(vec![Cell::from(*r), v.re.into(), v.im.into(), pr.re.into(), pr.im.into()]);
    }
    Ok(Artifact::Table(t))
}

fn jet(cfg: &RunConfig) -> Result<Artifact> {
    let p = cfg.jet.as_ref().ok_or_else(|| Error::Config("missing jet".into()))?;
    let m = model(cfg)?;
    let grid = ProjectionGrid::new(m.d, p.k, cfg.numeric.quad_nodes.max(p.k))?;
    let pos = grid.position(p.k, p.l)?;
    let jet = log_jets(&m, &grid, p.v0, cfg.numeric.n)?.swap_remove(pos);
    let mut t = Table::new("jet", &["n", "lambda_re", "lambda_im", "d_re", "d_im"]);
    t.param("k", p.k)
        .param("l", p.l)
        .param("d", m.d)
        .param("v0", p.v0)
        .param("tau", jet.tau)
        .param("log_radius", jet.guaranteed_log_radius());
    for (n, a) in jet.derivs.iter().enumerate() {
        let l = jet.exponents.get(n)?;
        t.push(vec![n.into(), l.re.into(), l.im.into(), a.re.into(), a.im.into()]);
    }
    Ok(Artifact::Table(t))
}

fn extend(cfg: &RunConfig, exec: &Exec) -> Result<Artifact> {
    let p = cfg.extend.as_ref().ok_or_else(|| Error::Config("missing extend".into()))?;
    let m = model(cfg)?;
    let num = cfg.numeric;
    let opts = ExtensionOptions {
        n: num.n,
        j: num.j,
        k_max: num.k_max,
        band: num.quad_nodes,
        tail_tol: num.tol,
        v0: None,
    };
    let ext = match &p.coefficients_in {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let records: Vec<CoefficientRecord> = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            AnnularExtension::from_records(m.d, m.r0, m.r1, m.tau_claimed, &records)?
        }
        None => AnnularExtension::build(&m, &opts)?,
    };
    if let Some(path) = &p.coefficients_out {
        let bytes = crate::output::json_bytes(&serde_json::to_value(ext.records()).expect("plain records"));
        std::fs::write(path, bytes).map_err(|e| Error::Invariant(format!("{}: {e}", path.display())))?;
    }
    let points = grid_points(&p.x.values(), &p.y.values());
    let rows = exec.map(&points, |&(x, y)| {
        let mut z = p.base.clone();
        z[p.axis] = C64::new(x, y);
        let lp = lie_point(&z);
        let (inside, value) = match ext.eval(&z) {
            Ok(v) => (true, v),
            Err(Error::LieDomain { .. }) => (false, nan()),
            Err(e) => return Err(e),
        };
        let direct = if z.iter().all(|c| c.im == 0.0) {
            let real: Vec<f64> = z.iter().map(|c| c.re).collect();
            if m.contains(&real) {
                m.value(&real)?
            } else {
                nan()
            }
        } else {
            nan()
        };
        Ok(vec![
            Cell::from(x),
            Cell::from(y),
            lp.l_minus.into(),
            lp.l_plus.into(),
            on_branch_cut(lp.q).into(),
            inside.into(),
            value.re.into(),
            value.im.into(),
            direct.re.into(),
            direct.im.into(),
        ])
    })?;
    let mut t = Table::new(
        "extend",
        &["x", "y", "l_minus", "l_plus", "cut", "inside", "re", "im", "direct_re", "direct_im"],
    );
    t.param("n", num.n)
        .param("j", num.j)
        .param("k_max", num.k_max)
        .param("quad_nodes", num.quad_nodes)
        .param("tol", num.tol)
        .param("axis", p.axis)
        .param("tau", ext.tau)
        .param("outer_radius", ext.outer_radius());
    for r in rows {
        t.push(r);
    }
    Ok(Artifact::Table(t))
}
