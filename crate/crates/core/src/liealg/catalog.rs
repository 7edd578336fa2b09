//! Generator catalog: Schrödinger, conformal Galilean and their dual,
//! logarithmic and parabolic variants.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::diffop::{imag, DiffOp, Mat2};
use super::label::{Family, GeneratorLabel};
use super::LieError;
use crate::symcore::rational::q_as_i64;
use crate::symcore::{q, qi, CoordSystem, ParamScalar, Q};

pub const CATALOG_IDS: &[&str] = &[
    "sch",
    "sv",
    "cga",
    "av",
    "ecga",
    "dual-sch",
    "dual-cga",
    "log-dual-sch",
    "age",
    "parabolic-N",
];

#[derive(Clone, Debug)]
pub struct Representation {
    pub id: String,
    pub dim: u32,
    pub window: (i64, i64),
    pub coords: Vec<String>,
    pub params: Vec<String>,
    pub generators: BTreeMap<GeneratorLabel, DiffOp>,
    /// Operator images of central labels (e.g. Theta acting as theta).
    pub centrals: BTreeMap<GeneratorLabel, DiffOp>,
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Sch { dimm: Mat2 },
    Cga,
    Ecga,
    Dual { dimm: Mat2, xi: Option<Mat2> },
    DualCga,
}

fn p(name: &str) -> ParamScalar {
    ParamScalar::param(name)
}

fn rat(v: Q) -> ParamScalar {
    ParamScalar::rational(v)
}

fn op(c: ParamScalar, mono: &[(&str, Q)], d: &[&str]) -> DiffOp {
    DiffOp::mono(c, mono, d)
}

fn mat_op(m: Mat2, mono: &[(&str, Q)]) -> DiffOp {
    DiffOp::matrix(m).compose(&op(ParamScalar::one(), mono, &[]))
}

pub fn spatial_name(base: &str, d: u32, j: u32) -> String {
    if d == 1 {
        base.to_string()
    } else {
        format!("{}{}", base, j)
    }
}

fn half() -> Q {
    q(1, 2)
}

/// Scaling-dimension matrix `x` or `[[x, x'], [0, x]]`.
pub fn dimension_matrix(x: &str, xp: Option<&str>) -> Mat2 {
    match xp {
        Some(xp) => Mat2::jordan(p(x), p(xp)),
        None => Mat2::scalar(p(x)),
    }
}

/// `sch(d)` / `sv(d)` in the mass representation.
pub fn sch_generator(l: &GeneratorLabel, d: u32, dimm: &Mat2) -> Option<DiffOp> {
    let n = l.idx();
    let r = |j: u32| spatial_name("r", d, j);
    match l.family {
        Family::X => {
            let np1 = &n + Q::one();
            let mut g = op(rat(-Q::one()), &[("t", &n + Q::one())], &["t"]);
            for j in 1..=d {
                let rj = r(j);
                g = g.add(&op(rat(-(&np1 * half())), &[("t", n.clone()), (&rj, Q::one())], &[&rj]));
                let c = p("M").scale_q(&(-(&np1 * &n) / qi(4)));
                g = g.add(&op(c, &[("t", &n - Q::one()), (&rj, qi(2))], &[]));
            }
            g = g.add(&mat_op(dimm.scale(&rat(-(&np1 * half()))), &[("t", n.clone())]));
            Some(g)
        }
        Family::Y => {
            let j = *l.spatial.first().unwrap_or(&1);
            if (d == 1) != l.spatial.is_empty() || j < 1 || j > d {
                return None;
            }
            let rj = r(j);
            let a = &n + half();
            let g = op(rat(-Q::one()), &[("t", a.clone())], &[&rj]);
            Some(g.add(&op(p("M").scale_q(&-a), &[("t", &n - half()), (&rj, Q::one())], &[])))
        }
        Family::M => Some(op(p("M").neg(), &[("t", n)], &[])),
        Family::R => rotation(l, d, false),
        _ => None,
    }
}

fn rotation(l: &GeneratorLabel, d: u32, with_gamma: bool) -> Option<DiffOp> {
    let (j, k) = match l.spatial.as_slice() {
        [j, k] if j < k && *k <= d => (*j, *k),
        _ => return None,
    };
    let n = l.idx();
    let mut g = DiffOp::zero();
    let mut bases = vec!["r"];
    if with_gamma {
        bases.push("gamma");
    }
    for b in bases {
        let (cj, ck) = (spatial_name(b, d, j), spatial_name(b, d, k));
        g = g.add(&op(rat(-Q::one()), &[("t", n.clone()), (&cj, Q::one())], &[&ck]));
        g = g.add(&op(ParamScalar::one(), &[("t", n.clone()), (&ck, Q::one())], &[&cj]));
    }
    Some(g)
}

/// `cga(d)` / `av(d)`; `gamma` are coordinates so that rotations can act on them.
pub fn cga_generator(l: &GeneratorLabel, d: u32, dimm: &Mat2) -> Option<DiffOp> {
    let n = l.idx();
    if l.index.as_ref().map(|v| !v.is_integer()).unwrap_or(false) {
        return None;
    }
    let np1 = &n + Q::one();
    match l.family {
        Family::X => {
            let mut g = op(rat(-Q::one()), &[("t", np1.clone())], &["t"]);
            for j in 1..=d {
                let rj = spatial_name("r", d, j);
                let gj = spatial_name("gamma", d, j);
                g = g.add(&op(rat(-np1.clone()), &[("t", n.clone()), (&rj, Q::one())], &[&rj]));
                g = g.add(&op(
                    rat(-(&n * &np1)),
                    &[("t", &n - Q::one()), (&gj, Q::one()), (&rj, Q::one())],
                    &[],
                ));
            }
            g = g.add(&mat_op(dimm.scale(&rat(-np1)), &[("t", n)]));
            Some(g)
        }
        Family::Y => {
            let j = *l.spatial.first().unwrap_or(&1);
            if (d == 1) != l.spatial.is_empty() || j < 1 || j > d {
                return None;
            }
            let rj = spatial_name("r", d, j);
            let gj = spatial_name("gamma", d, j);
            let g = op(rat(-Q::one()), &[("t", np1.clone())], &[&rj]);
            Some(g.add(&op(rat(-np1), &[("t", n), (&gj, Q::one())], &[])))
        }
        Family::R => rotation(l, d, true),
        _ => None,
    }
}

/// Exotic extension in d = 2 with `h1 = eta`, `h2 = -theta d_eta`.
pub fn ecga_generator(l: &GeneratorLabel) -> Option<DiffOp> {
    let n = l.idx();
    let np1 = &n + Q::one();
    if let Some(v) = &l.index {
        let k = q_as_i64(v)?;
        if !(-1..=1).contains(&k) {
            return None;
        }
    }
    let h1r = |c: Q, r: &str, tpow: Q| op(rat(c), &[("t", tpow), ("eta", Q::one()), (r, Q::one())], &[]);
    let h2r = |c: Q, r: &str, tpow: Q| op(p("theta").scale_q(&-c), &[("t", tpow), (r, Q::one())], &["eta"]);
    match l.family {
        Family::X => {
            let mut g = op(rat(-Q::one()), &[("t", np1.clone())], &["t"]);
            for j in ["1", "2"] {
                let rj = format!("r{}", j);
                let gj = format!("gamma{}", j);
                g = g.add(&op(rat(-np1.clone()), &[("t", n.clone()), (&rj, Q::one())], &[&rj]));
                g = g.add(&op(
                    rat(-(&n * &np1)),
                    &[("t", &n - Q::one()), (&gj, Q::one()), (&rj, Q::one())],
                    &[],
                ));
            }
            g = g.add(&op(p("lambda").scale_q(&-np1.clone()), &[("t", n.clone())], &[]));
            let c = -(&n * &np1);
            g = g.add(&h1r(c.clone(), "r1", Q::zero())).add(&h2r(c, "r2", Q::zero()));
            Some(g)
        }
        Family::Y => {
            let j = *l.spatial.first()?;
            let (rj, gj, other) = match j {
                1 => ("r1", "gamma1", "r2"),
                2 => ("r2", "gamma2", "r1"),
                _ => return None,
            };
            let mut g = op(rat(-Q::one()), &[("t", np1.clone())], &[rj]);
            g = g.add(&op(rat(-np1.clone()), &[("t", n.clone()), (gj, Q::one())], &[]));
            if j == 1 {
                g = g.add(&op(rat(-np1.clone()), &[("t", n.clone()), ("eta", Q::one())], &[]));
            } else {
                g = g.add(&op(p("theta").scale_q(&np1), &[("t", n.clone())], &["eta"]));
            }
            let sign = if j == 1 { -Q::one() } else { Q::one() };
            g = g.add(&op(p("theta").scale_q(&(sign * &n * &np1)), &[(other, Q::one())], &[]));
            Some(g)
        }
        Family::R if n.is_zero() && l.spatial == [1, 2] => {
            let mut g = rotation(l, 2, true)?;
            let inv_theta = p("theta").inv()?;
            g = g.add(&op(inv_theta.scale_q(&-half()), &[("eta", qi(2))], &[]));
            g = g.add(&op(p("theta").scale_q(&-half()), &[], &["eta", "eta"]));
            Some(g)
        }
        Family::H => match l.spatial.as_slice() {
            [1] => Some(DiffOp::coord("eta")),
            [2] => Some(op(p("theta").neg(), &[], &["eta"])),
            _ => None,
        },
        _ => None,
    }
}

/// Dual (mass-transformed) Schrödinger generators in d = 1.
pub fn dual_generator(l: &GeneratorLabel, dimm: &Mat2, xi: Option<&Mat2>) -> Option<DiffOp> {
    let n = l.idx();
    match l.family {
        Family::X => {
            let np1 = &n + Q::one();
            let mut g = op(imag().scale_q(&(&np1 * &n / qi(4))), &[("t", &n - Q::one()), ("r", qi(2))], &["zeta"]);
            g = g.add(&op(rat(-Q::one()), &[("t", np1.clone())], &["t"]));
            g = g.add(&op(rat(-(&np1 * half())), &[("t", n.clone()), ("r", Q::one())], &["r"]));
            g = g.add(&mat_op(dimm.scale(&rat(-(&np1 * half()))), &[("t", n)]));
            Some(g)
        }
        Family::Y => {
            if !l.spatial.is_empty() {
                return None;
            }
            let a = &n + half();
            let g = op(imag().scale_q(&a), &[("t", &n - half()), ("r", Q::one())], &["zeta"]);
            Some(g.add(&op(rat(-Q::one()), &[("t", a)], &["r"])))
        }
        Family::M => Some(op(imag(), &[("t", n)], &["zeta"])),
        Family::N if l.index.is_none() => {
            let xi = xi?;
            let g = op(ParamScalar::one(), &[("zeta", Q::one())], &["zeta"]);
            Some(g.sub(&op(ParamScalar::one(), &[("t", Q::one())], &["t"])).add(&DiffOp::matrix(xi.clone())))
        }
        _ => None,
    }
}

/// Dual conformal Galilean generators (x, xi scalar).
pub fn dual_cga_generator(l: &GeneratorLabel) -> Option<DiffOp> {
    let xs = p("x").add(&p("xi"));
    match (&l.family, l.index.as_ref().and_then(|v| q_as_i64(&(v * qi(2))))) {
        (Family::X, Some(2)) => {
            let g = op(imag().scale_q(&half()), &[("r", qi(2))], &["zeta"]);
            let g = g.add(&op(rat(-Q::one()), &[("t", qi(2))], &["t"]));
            let g = g.add(&op(rat(-Q::one()), &[("t", Q::one()), ("r", Q::one())], &["r"]));
            Some(g.add(&op(xs.neg(), &[("t", Q::one())], &[])))
        }
        (Family::X, Some(0)) => dual_generator(l, &Mat2::scalar(p("x")), None),
        (Family::Y, Some(1)) | (Family::Y, Some(-1)) | (Family::M, Some(0)) => {
            dual_generator(l, &Mat2::scalar(p("x")), None)
        }
        (Family::N, None) => dual_generator(l, &Mat2::scalar(p("x")), Some(&Mat2::scalar(p("xi")))),
        (Family::D, None) => {
            let x0 = dual_generator(&GeneratorLabel::x(Q::zero()), &Mat2::scalar(p("x")), None)?;
            let nn = dual_cga_generator(&GeneratorLabel::plain(Family::N))?;
            Some(x0.scale_int(2).sub(&nn))
        }
        (Family::V, None) => {
            let mut g = op(rat(-Q::one()), &[("zeta", Q::one()), ("r", Q::one())], &["zeta"]);
            g = g.add(&op(rat(-Q::one()), &[("t", Q::one()), ("r", Q::one())], &["t"]));
            g = g.add(&op(imag().neg(), &[("zeta", Q::one()), ("t", Q::one())], &["r"]));
            g = g.add(&op(rat(-half()), &[("r", qi(2))], &["r"]));
            Some(g.add(&op(xs.neg(), &[("r", Q::one())], &[])))
        }
        _ => None,
    }
}

/// The Schrödinger operator whose solutions the dual CGA generators preserve.
pub fn schroedinger_operator() -> DiffOp {
    let g = op(imag().scale_q(&qi(-2)), &[], &["zeta", "t"]);
    let g = g.add(&op(rat(-Q::one()), &[], &["r", "r"]));
    let c = p("x").add(&p("xi")).sub(&ParamScalar::ratio(1, 2)).mul(&imag()).scale_q(&qi(-2));
    g.add(&op(c, &[("t", -Q::one())], &["zeta"]))
}

/// Half-integers `m` with `a <= m <= b`.
fn half_window(a: i64, b: i64) -> Vec<Q> {
    (a..b).map(|k| qi(k) + half()).collect()
}

fn int_window(a: i64, b: i64) -> Vec<Q> {
    (a..=b).map(qi).collect()
}

impl Representation {
    /// Operator for a label: stored generator, central image, or built on demand.
    pub fn operator(&self, l: &GeneratorLabel) -> Option<DiffOp> {
        if let Some(g) = self.generators.get(l) {
            return Some(g.clone());
        }
        if let Some(g) = self.centrals.get(l) {
            return Some(g.clone());
        }
        if let Family::Central(_) = l.family {
            return Some(DiffOp::zero());
        }
        match &self.kind {
            Kind::Sch { dimm } => sch_generator(l, self.dim, dimm),
            Kind::Cga => cga_generator(l, self.dim, &Mat2::scalar(p("x"))),
            Kind::Ecga => ecga_generator(l),
            Kind::Dual { dimm, xi } => dual_generator(l, dimm, xi.as_ref()),
            Kind::DualCga => dual_cga_generator(l),
        }
    }

    pub fn labels(&self) -> Vec<GeneratorLabel> {
        self.generators.keys().cloned().collect()
    }

    /// Base coordinate system of a single leg.
    pub fn system(&self) -> CoordSystem {
        let names: Vec<&str> = self.coords.iter().map(|s| s.as_str()).collect();
        CoordSystem::with_base(&names)
    }

    /// Replace one generator (used by mutation tests).
    pub fn with_generator(&self, l: &GeneratorLabel, g: DiffOp) -> Representation {
        let mut out = self.clone();
        out.generators.insert(l.clone(), g);
        out
    }

    pub fn substitute_params(&self, b: &BTreeMap<String, ParamScalar>) -> Result<Representation, LieError> {
        let mut out = self.clone();
        for g in out.generators.values_mut() {
            *g = g.substitute_params(b)?;
        }
        for g in out.centrals.values_mut() {
            *g = g.substitute_params(b)?;
        }
        out.kind = match &self.kind {
            Kind::Sch { dimm } => Kind::Sch { dimm: dimm.substitute(b)? },
            Kind::Dual { dimm, xi } => Kind::Dual {
                dimm: dimm.substitute(b)?,
                xi: xi.as_ref().map(|m| m.substitute(b)).transpose()?,
            },
            k => k.clone(),
        };
        Ok(out)
    }
}

fn collect(labels: Vec<GeneratorLabel>, f: impl Fn(&GeneratorLabel) -> Option<DiffOp>) -> Result<BTreeMap<GeneratorLabel, DiffOp>, LieError> {
    let mut out = BTreeMap::new();
    for l in labels {
        let g = f(&l).ok_or_else(|| LieError::Build(format!("no generator {}", l)))?;
        out.insert(l, g);
    }
    Ok(out)
}

fn sch_labels(d: u32, xs: &[Q], ys: &[Q], ms: &[Q], rs: &[Q]) -> Vec<GeneratorLabel> {
    let mut v: Vec<GeneratorLabel> = xs.iter().map(|n| GeneratorLabel::x(n.clone())).collect();
    for m in ys {
        if d == 1 {
            v.push(GeneratorLabel::y(m.clone(), None));
        } else {
            v.extend((1..=d).map(|j| GeneratorLabel::y(m.clone(), Some(j))));
        }
    }
    v.extend(ms.iter().map(|n| GeneratorLabel::m(n.clone())));
    for n in rs {
        for j in 1..=d {
            for k in (j + 1)..=d {
                v.push(GeneratorLabel::r(n.clone(), j, k).0);
            }
        }
    }
    v
}

fn spatial_coords(base: &str, d: u32) -> Vec<String> {
    (1..=d).map(|j| spatial_name(base, d, j)).collect()
}

/// Build a catalog representation. `window` applies to the infinite families.
pub fn build_representation(id: &str, d: u32, window: (i64, i64)) -> Result<Representation, LieError> {
    if d == 0 {
        return Err(LieError::Build("dimension must be positive".into()));
    }
    let (a, b) = window;
    if a > b {
        return Err(LieError::Build(format!("empty window {}..{}", a, b)));
    }
    let fin = int_window(-1, 1);
    let zero = vec![Q::zero()];
    let dual_only = |name: &str| -> Result<(), LieError> {
        if d != 1 {
            return Err(LieError::Build(format!("`{}` is defined for d = 1 only", name)));
        }
        Ok(())
    };
    let t_first = |mut v: Vec<String>| {
        v.insert(0, "t".to_string());
        v
    };
    let dual_coords = vec!["zeta".to_string(), "t".to_string(), "r".to_string()];
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let rep = match id {
        "sch" | "sv" => {
            let dimm = Mat2::scalar(p("x"));
            let labels = if id == "sch" {
                sch_labels(d, &fin, &half_window(-1, 1), &zero, &zero)
            } else {
                let w = int_window(a, b);
                sch_labels(d, &w, &half_window(a, b), &w, &w)
            };
            Representation {
                id: id.into(),
                dim: d,
                window,
                coords: t_first(spatial_coords("r", d)),
                params: names(&["M", "x"]),
                generators: collect(labels, |l| sch_generator(l, d, &dimm))?,
                centrals: BTreeMap::new(),
                kind: Kind::Sch { dimm },
            }
        }
        "cga" | "av" => {
            let dimm = Mat2::scalar(p("x"));
            let labels = if id == "cga" {
                sch_labels(d, &fin, &[], &[], &zero)
                    .into_iter()
                    .chain(sch_labels(d, &[], &fin, &[], &[]))
                    .collect()
            } else {
                let w = int_window(a, b);
                sch_labels(d, &w, &[], &[], &w)
                    .into_iter()
                    .chain(sch_labels(d, &[], &w, &[], &[]))
                    .collect()
            };
            let mut coords = t_first(spatial_coords("r", d));
            coords.extend(spatial_coords("gamma", d));
            Representation {
                id: id.into(),
                dim: d,
                window,
                coords,
                params: names(&["x"]),
                generators: collect(labels, |l| cga_generator(l, d, &dimm))?,
                centrals: BTreeMap::new(),
                kind: Kind::Cga,
            }
        }
        "ecga" => {
            if d != 2 {
                return Err(LieError::Build("`ecga` requires d = 2".into()));
            }
            let mut labels: Vec<GeneratorLabel> = fin.iter().map(|n| GeneratorLabel::x(n.clone())).collect();
            for n in &fin {
                labels.push(GeneratorLabel::y(n.clone(), Some(1)));
                labels.push(GeneratorLabel::y(n.clone(), Some(2)));
            }
            labels.push(GeneratorLabel::r(Q::zero(), 1, 2).0);
            let mut centrals = BTreeMap::new();
            centrals.insert(GeneratorLabel::plain(Family::Theta), DiffOp::scalar(p("theta")));
            Representation {
                id: id.into(),
                dim: 2,
                window: (-1, 1),
                coords: names(&["t", "r1", "r2", "gamma1", "gamma2", "eta"]),
                params: names(&["lambda", "theta"]),
                generators: collect(labels, ecga_generator)?,
                centrals,
                kind: Kind::Ecga,
            }
        }
        "dual-sch" | "log-dual-sch" | "age" | "parabolic-N" => {
            dual_only(id)?;
            let (dimm, params) = match id {
                "dual-sch" => (Mat2::scalar(p("x")), names(&["x"])),
                "age" => (Mat2::scalar(p("x")), names(&["x", "xi"])),
                "log-dual-sch" => (dimension_matrix("x", Some("xp")), names(&["x", "xp"])),
                _ => (dimension_matrix("x", Some("xp")), names(&["x", "xp", "xi", "xip"])),
            };
            let xi = (id == "parabolic-N").then(|| Mat2::jordan(p("xi"), p("xip")));
            let xs = if id == "age" { int_window(0, 1) } else { fin.clone() };
            let mut labels = sch_labels(1, &xs, &half_window(-1, 1), &zero, &[]);
            if xi.is_some() {
                labels.push(GeneratorLabel::plain(Family::N));
            }
            let mut generators = collect(labels, |l| dual_generator(l, &dimm, xi.as_ref()))?;
            if id == "age" {
                let x1 = GeneratorLabel::x(Q::one());
                generators.insert(x1.clone(), dual_cga_generator(&x1).expect("X1"));
            }
            Representation {
                id: id.into(),
                dim: 1,
                window: (-1, 1),
                coords: dual_coords,
                params,
                generators,
                centrals: BTreeMap::new(),
                kind: Kind::Dual { dimm, xi },
            }
        }
        "dual-cga" => {
            dual_only(id)?;
            let labels = vec![
                GeneratorLabel::x(Q::zero()),
                GeneratorLabel::x(Q::one()),
                GeneratorLabel::y(half(), None),
                GeneratorLabel::y(-half(), None),
                GeneratorLabel::m(Q::zero()),
                GeneratorLabel::plain(Family::V),
                GeneratorLabel::plain(Family::N),
                GeneratorLabel::plain(Family::D),
            ];
            Representation {
                id: id.into(),
                dim: 1,
                window: (-1, 1),
                coords: dual_coords,
                params: names(&["x", "xi"]),
                generators: collect(labels, dual_cga_generator)?,
                centrals: BTreeMap::new(),
                kind: Kind::DualCga,
            }
        }
        other => return Err(LieError::UnknownId(other.to_string())),
    };
    Ok(rep)
}

/// `N` with the full matrix `[[xi, xi'], [xi'', xi]]`.
pub fn parabolic_n_full() -> DiffOp {
    let xi = Mat2::new(p("xi"), p("xip"), p("xipp"), p("xi"));
    dual_generator(&GeneratorLabel::plain(Family::N), &Mat2::zero(), Some(&xi)).expect("N")
}

/// Logarithmic dual `X0` with the Jordan dimension matrix.
pub fn log_dual_x0() -> DiffOp {
    dual_generator(&GeneratorLabel::x(Q::zero()), &dimension_matrix("x", Some("xp")), None).expect("X0")
}
