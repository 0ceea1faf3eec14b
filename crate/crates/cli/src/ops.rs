//! One function per verb. Each takes the parsed input document and returns a report.

use lieorbit::heisenberg::{
    bform_gram, heis_bform, heis_coadjoint, heis_coadjoint_matrix, heis_embed, heis_inv, heis_lie_bracket, heis_mul,
    heis_pairing, heis_polarization_check, heis_radical, plancherel_density,
};
use lieorbit::jacobi::{
    export_table, jacobi_action, jacobi_coadjoint, jacobi_embed, jacobi_iwasawa, jacobi_mul, killing_check,
    orbit_membership, verify_commutation_table, IwasawaMode, JacobiElement, JacobiPoint, OrbitFamily, Table,
};
use lieorbit::jacobi_forms::{
    fourier_coefficient, invariance_points, point11, theta_eval_with, theta_slash_invariance, ThetaGenerator,
};
use lieorbit::scalar::{ri, CRat, Rat};
use lieorbit::schrodinger::{commutant_dimension, rep_trace, GridHeisElement, GridRep};
use lieorbit::sl2::{
    cayley_transform, is_cayley, is_normal, jacobson_morozov, morphism_class, sekiguchi_grading, sekiguchi_image,
};
use lieorbit::{ExecMode, Matrix};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::codec::*;

/// Failure of a verb: bad input (exit 3) or a library error (exit 2).
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Lib(lieorbit::Error),
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e.0)
    }
}

impl From<lieorbit::Error> for CliError {
    fn from(e: lieorbit::Error) -> Self {
        match e {
            lieorbit::Error::Parse(msg) => CliError::Parse(msg),
            other => CliError::Lib(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 3,
            CliError::Lib(_) => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, detail) = match self {
            CliError::Parse(d) => ("parse", d.clone()),
            CliError::Lib(e) => (e.kind(), e.to_string()),
        };
        json!({"error": {"kind": kind, "detail": detail}})
    }
}

pub type Outcome = std::result::Result<Report, CliError>;

#[derive(Debug, Clone)]
pub struct Report {
    pub op: String,
    pub inputs: Value,
    pub result: Value,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Report {
    fn new(op: &str, inputs: &Value, result: Value) -> Self {
        Report { op: op.into(), inputs: inputs.clone(), result, residual: None, tolerance: None, pass: true }
    }

    /// Attaches a residual check `residual ≤ tolerance`.
    fn checked(mut self, residual: f64, tolerance: f64) -> Self {
        self.pass = residual <= tolerance;
        self.residual = Some(residual);
        self.tolerance = Some(tolerance);
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "op": self.op,
            "inputs": self.inputs,
            "result": self.result,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.pass,
        })
    }
}

/// Flags shared by every verb.
#[derive(Debug, Clone, Copy)]
pub struct Opts {
    pub tol: Option<f64>,
    pub exact: bool,
    pub mode: ExecMode,
}

impl Opts {
    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Exact kinds compare with zero tolerance unless overridden.
    fn kind_tol(&self, float_default: f64) -> f64 {
        self.tol.unwrap_or(if self.exact { 0.0 } else { float_default })
    }
}

macro_rules! by_kind {
    ($opts:expr, $f:ident ( $($arg:expr),* )) => {
        if $opts.exact { $f::<Rat>($($arg),*) } else { $f::<f64>($($arg),*) }
    };
}

// ---- heis ----

pub fn heis_mul_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let f = Fields::of(v, "input")?;
        let (x, y) = (heis_from_json::<S>(f.get("x")?)?, heis_from_json::<S>(f.get("y")?)?);
        Ok(Report::new("heis mul", v, heis_to_json(&heis_mul(&x, &y)?)))
    }
    by_kind!(o, run(v))
}

pub fn heis_inv_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let x = heis_from_json::<S>(Fields::of(v, "input")?.get("x")?)?;
        Ok(Report::new("heis inv", v, heis_to_json(&heis_inv(&x))))
    }
    by_kind!(o, run(v))
}

/// Closed form, checked against conjugating the block realization.
pub fn heis_coadjoint_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value, tol: f64) -> Outcome {
        let f = Fields::of(v, "input")?;
        let x = heis_from_json::<S>(f.get("x")?)?;
        let d = heis_dual_from_json::<S>(f.get("F")?)?;
        let closed = heis_coadjoint(&x, &d)?;
        let oracle = heis_coadjoint_matrix(&x, &d);
        let residual = closed.a.max_diff(&oracle.a).max(closed.b.max_diff(&oracle.b)).max(closed.c.max_diff(&oracle.c));
        Ok(Report::new("heis coadjoint", v, heis_dual_to_json(&closed)).checked(residual, tol))
    }
    let tol = o.kind_tol(1e-10);
    by_kind!(o, run(v, tol))
}

pub fn heis_embed_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let x = heis_from_json::<S>(Fields::of(v, "input")?.get("x")?)?;
        Ok(Report::new("heis embed", v, matrix_to_json(&heis_embed(&x))))
    }
    by_kind!(o, run(v))
}

/// `B_F(X, Y)`, checked against `⟨F, [X, Y]⟩`.
pub fn heis_bform_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value, tol: f64) -> Outcome {
        let f = Fields::of(v, "input")?;
        let d = heis_dual_from_json::<S>(f.get("F")?)?;
        let (x, y) = (heis_lie_from_json::<S>(f.get("X")?)?, heis_lie_from_json::<S>(f.get("Y")?)?);
        if x.dims() != d.dims() || y.dims() != d.dims() {
            return Err(lieorbit::Error::DimMismatch("F, X and Y differ in (g, h)".into()).into());
        }
        let b = heis_bform(&d, &x, &y);
        let via_bracket = heis_pairing(&d, &heis_lie_bracket(&x, &y))?;
        let residual =
            Matrix::from_fn(1, 1, |_, _| b.clone()).max_diff(&Matrix::from_fn(1, 1, |_, _| via_bracket.clone()));
        Ok(Report::new("heis bform", v, b.to_json()).checked(residual, tol))
    }
    let tol = o.kind_tol(1e-10);
    by_kind!(o, run(v, tol))
}

/// Radical of `B_F`; the check is `rank Gram = dim 𝔤 − dim rad`.
pub fn heis_radical_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value, tol: f64) -> Outcome {
        let d = heis_dual_from_json::<S>(Fields::of(v, "input")?.get("F")?)?;
        let rad = heis_radical(&d, tol);
        let gram = bform_gram(&d);
        let consistent = gram.rank(tol) + rad.len() == gram.rows();
        let mut r = Report::new(
            "heis radical",
            v,
            json!({
                "dim": rad.len(),
                "orbit_dim": gram.rows() - rad.len(),
                "basis": rad.iter().map(heis_lie_to_json).collect::<Vec<_>>(),
            }),
        );
        r.pass = consistent;
        Ok(r)
    }
    let tol = o.kind_tol(1e-10);
    by_kind!(o, run(v, tol))
}

pub fn heis_polarization_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let f = Fields::of(v, "input")?;
        let rep = heis_polarization_check(&f.matrix::<S>("c")?, f.usize("g")?)?;
        let mut r = Report::new(
            "heis polarization",
            v,
            json!({
                "basis": rep.basis.iter().map(heis_lie_to_json).collect::<Vec<_>>(),
                "isotropic": rep.isotropic,
                "maximal": rep.maximal,
                "radical_dim": rep.radical_dim,
                "extension_witness": rep.extension_witness.as_ref().map(|(a, b)| json!([heis_lie_to_json(a), heis_lie_to_json(b)])),
            }),
        );
        r.pass = rep.isotropic && rep.maximal;
        Ok(r)
    }
    by_kind!(o, run(v))
}

pub fn heis_plancherel_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let d = heis_dual_from_json::<S>(Fields::of(v, "input")?.get("F")?)?;
        Ok(Report::new("heis plancherel", v, plancherel_density(&d)?.to_json()))
    }
    by_kind!(o, run(v))
}

// ---- sl2 ----

/// `{"E", "ambient", "n"}`: completes `E` to a triple and reports the relation defects.
pub fn sl2_complete_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value, tol: f64) -> Outcome {
        let f = Fields::of(v, "input")?;
        let t = jacobson_morozov(&f.matrix::<S>("E")?, ambient_from_json(&f)?)?;
        let residual = t.defects().iter().map(|d| d.max_abs()).fold(0.0, f64::max);
        Ok(Report::new("sl2 complete", v, triple_to_json(&t)).checked(residual, tol))
    }
    let tol = o.kind_tol(1e-9);
    by_kind!(o, run(v, tol))
}

/// Always exact: the transform needs `i` and the inputs are Gaussian rationals.
pub fn sl2_cayley_op(v: &Value, _o: &Opts) -> Outcome {
    let t = triple_from_json::<CRat>(v)?;
    let c = cayley_transform(&t)?;
    let mut r = Report::new("sl2 cayley", v, json!({"triple": triple_to_json(&c), "is_normal": is_normal(&c)}));
    r.pass = is_normal(&c);
    Ok(r)
}

pub fn sl2_sekiguchi_op(v: &Value, _o: &Opts) -> Outcome {
    let t = triple_from_json::<CRat>(v)?;
    let x = sekiguchi_image(&t)?;
    let h = sekiguchi_grading(&t);
    let two = CRat::new(ri(2), ri(0));
    let graded = h.commutator(&x) == x.scale(&two);
    let mut r = Report::new("sl2 sekiguchi", v, json!({"x": matrix_to_json(&x), "grading": matrix_to_json(&h)}));
    r.pass = graded;
    Ok(r)
}

pub fn sl2_classify_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let t = triple_from_json::<S>(v)?;
        let m = morphism_class(&t);
        Ok(Report::new(
            "sl2 classify",
            v,
            json!({"real": m.real, "theta": m.theta, "cayley": is_cayley(&t), "normal": is_normal(&t)}),
        ))
    }
    if o.exact {
        run::<CRat>(v)
    } else {
        run::<Complex64>(v)
    }
}

// ---- jacobi ----

pub fn jacobi_mul_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let f = Fields::of(v, "input")?;
        let (x, y) = (jacobi_from_json::<S>(f.get("x")?)?, jacobi_from_json::<S>(f.get("y")?)?);
        Ok(Report::new("jacobi mul", v, jacobi_to_json(&jacobi_mul(&x, &y)?)))
    }
    by_kind!(o, run(v))
}

pub fn jacobi_embed_op(v: &Value, o: &Opts) -> Outcome {
    fn run<S: JsonScalar>(v: &Value) -> Outcome {
        let x = jacobi_from_json::<S>(Fields::of(v, "input")?.get("x")?)?;
        Ok(Report::new("jacobi embed", v, matrix_to_json(&jacobi_embed(&x))))
    }
    by_kind!(o, run(v))
}

/// `{"g", "point"}`; the point defaults to `(iE, 0)`.
pub fn jacobi_act_op(v: &Value, _o: &Opts) -> Outcome {
    let f = Fields::of(v, "input")?;
    let g = jacobi_from_json::<f64>(f.get("g")?)?;
    let (n, m) = g.dims();
    let pt = match f.opt("point") {
        Some(p) => point_from_json(p)?,
        None => JacobiPoint::base(n, m),
    };
    Ok(Report::new("jacobi act", v, point_to_json(&jacobi_action(&g, &pt)?)))
}

pub fn jacobi_iwasawa_op(v: &Value, o: &Opts) -> Outcome {
    let f = Fields::of(v, "input")?;
    let g = jacobi_from_json::<f64>(f.get("g")?)?;
    let mode = match f.opt("mode") {
        Some(m) => serde_json::from_value::<IwasawaMode>(m.clone())
            .map_err(|_| CliError::Parse("mode must be \"nilpotent-center\" or \"compact-center\"".into()))?,
        None => IwasawaMode::NilpotentCenter,
    };
    let tol = o.tol_or(1e-9);
    let d = jacobi_iwasawa(&g, mode)?;
    let valid = d.validate(tol);
    let mut r = Report::new(
        "jacobi iwasawa",
        v,
        json!({
            "mode": mode,
            "nil": jacobi_to_json(&d.nil),
            "diag": jacobi_to_json(&d.diag),
            "compact": jacobi_to_json(&d.compact),
            "factor_check": valid.as_ref().err(),
        }),
    )
    .checked(d.reconstruction_error(&g), tol);
    r.pass &= valid.is_ok();
    Ok(r)
}

pub fn jacobi_table_op(n: usize, m: usize, verify: bool, complex: bool, o: &Opts) -> Outcome {
    if n == 0 || m == 0 {
        return Err(lieorbit::Error::Shape("n and m must be positive".into()).into());
    }
    let inputs = json!({"n": n, "m": m, "verify": verify, "complex": complex});
    if !verify {
        let rows = export_table(n, m, if complex { Table::Complex } else { Table::Real });
        return Ok(Report::new("jacobi table", &inputs, serde_json::to_value(rows).expect("plain data")));
    }
    let rep = verify_commutation_table(n, m, o.mode);
    let mut r = Report::new(
        "jacobi table",
        &inputs,
        json!({
            "identities": rep.identities.len(),
            "failures": rep.failures(),
            "printed_failures": rep.printed_failures(),
            "printed_failure_families": rep.printed_failure_families(),
            "inclusions": rep.inclusions,
            "checks": rep.identities,
        }),
    );
    r.pass = rep.failures() == 0 && rep.inclusions_consistent();
    Ok(r)
}

pub fn jacobi_killing_op(n: usize) -> Outcome {
    if n == 0 {
        return Err(lieorbit::Error::Shape("n must be positive".into()).into());
    }
    let rep = killing_check(n);
    let mut r = Report::new("jacobi killing", &json!({"n": n}), serde_json::to_value(&rep).expect("plain data"));
    r.pass = rep.failures.is_empty();
    Ok(r)
}

/// `{"g", "family"}`: pushes the family seed forward by `g` and tests membership.
pub fn jacobi_orbit_op(v: &Value, o: &Opts) -> Outcome {
    let f = Fields::of(v, "input")?;
    let family = OrbitFamily::parse(f.str("family")?)?;
    let g = match f.opt("g") {
        Some(g) => jacobi_from_json::<f64>(g)?,
        None => JacobiElement::identity(1, 1),
    };
    let pushed = jacobi_coadjoint(&g, &family.seed())?;
    let tol = o.tol_or(1e-9);
    let mem = orbit_membership(&pushed, family, tol)?;
    let mut r =
        Report::new("jacobi orbit", v, json!({"family": family, "F": jacobi_dual_to_json(&pushed), "membership": mem}))
            .checked(mem.residual, tol);
    r.pass &= mem.member;
    Ok(r)
}

// ---- orbit ----

/// `{"F", "family"}` for `n = m = 1`.
pub fn orbit_check_op(v: &Value, o: &Opts) -> Outcome {
    let f = Fields::of(v, "input")?;
    let family = OrbitFamily::parse(f.str("family")?)?;
    let d = jacobi_dual_from_json::<f64>(f.get("F")?)?;
    let tol = o.tol_or(1e-9);
    let mem = orbit_membership(&d, family, tol)?;
    let mut r =
        Report::new("orbit check", v, serde_json::to_value(&mem).expect("plain data")).checked(mem.residual, tol);
    r.pass &= mem.member;
    Ok(r)
}

// ---- theta ----

fn theta_inputs(v: &Value) -> std::result::Result<(lieorbit::jacobi_forms::ThetaSpec, Fields<'_>), CliError> {
    let f = Fields::of(v, "input")?;
    Ok((theta_spec_from_json(f.get("spec")?)?, f))
}

/// `{"spec", "point"}`; the point defaults to `(i, 0)`.
pub fn theta_eval_op(v: &Value, o: &Opts) -> Outcome {
    let (spec, f) = theta_inputs(v)?;
    let pt = match f.opt("point") {
        Some(p) => point_from_json(p)?,
        None => JacobiPoint::base(1, spec.m()),
    };
    let val = theta_eval_with(&spec, &pt, o.mode)?;
    Ok(Report::new("theta eval", v, serde_json::to_value(val).expect("plain data")))
}

/// `{"spec", "generator"}`: the residual is checked against `tol` plus the tail bounds.
pub fn theta_invariance_op(v: &Value, o: &Opts) -> Outcome {
    let (spec, f) = theta_inputs(v)?;
    let gen = match f.str("generator")? {
        "translation" => ThetaGenerator::Translation,
        "lambda-shift" => ThetaGenerator::LambdaShift,
        "mu-shift" => ThetaGenerator::MuShift,
        "inversion" => ThetaGenerator::Inversion,
        other => return Err(CliError::Parse(format!("unknown generator {other:?}"))),
    };
    let rep = theta_slash_invariance(&spec, &gen.element(spec.m()), &invariance_points(spec.m()))?;
    let tol = o.tol_or(1e-8) + rep.tail_bound;
    Ok(Report::new("theta invariance", v, serde_json::to_value(&rep).expect("plain data")).checked(rep.residual, tol))
}

/// `{"spec", "T", "R", "Y", "V", "grid"}` with `Y = V = 1`, `grid = 64` by default.
pub fn theta_fourier_op(v: &Value, o: &Opts) -> Outcome {
    let (spec, f) = theta_inputs(v)?;
    if spec.m() != 1 {
        return Err(lieorbit::Error::Precondition("Fourier coefficients need m = 1".into()).into());
    }
    let t = Rat::from_json(f.get("T")?)?;
    let r = f.i64("R")?;
    let y = if f.opt("Y").is_some() { f.f64("Y")? } else { 1.0 };
    let vv = if f.opt("V").is_some() { f.f64("V")? } else { 1.0 };
    let grid = if f.opt("grid").is_some() { f.usize("grid")? } else { 64 };
    let func = |tau, z| Ok(theta_eval_with(&spec, &point11(tau, z)?, ExecMode::Sequential)?.value());
    let c = fourier_coefficient(func, &t, r, y, vv, grid, o.mode)?;
    Ok(Report::new("theta fourier", v, c.to_json()))
}

// ---- rep ----

fn grid_inputs(v: &Value) -> std::result::Result<(GridRep, Fields<'_>), CliError> {
    let f = Fields::of(v, "input")?;
    let rep = GridRep::new(f.i64("N")?, f.usize("g")?, f.usize("h")?, f.int_rows("c")?)?;
    Ok((rep, f))
}

/// Trace of `π(x)` against the closed form: `N^{hg} ω^{σ(cκ)}` on the centre, 0 elsewhere.
pub fn rep_trace_op(v: &Value, o: &Opts) -> Outcome {
    let (rep, f) = grid_inputs(v)?;
    let xf = Fields::of(f.get("x")?, "x")?;
    let x = GridHeisElement::new(&rep, xf.int_rows("lambda")?, xf.int_rows("mu")?, xf.int_rows("kappa")?)?;
    let tr = rep_trace(&rep, &x)?;
    let central = x.lambda.iter().chain(&x.mu).flatten().all(|&e| e == 0);
    let expected = if central {
        let h = x.kappa.len();
        let e: i64 = (0..h).map(|i| (0..h).map(|j| rep.c()[i][j] * x.kappa[j][i]).sum::<i64>()).sum();
        let size = rep.grid_size().ok_or(lieorbit::Error::TooLarge { size: usize::MAX, cap: usize::MAX })?;
        rep.omega_pow(e) * size as f64
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(Report::new("rep trace", v, json!({"trace": tr.to_json(), "expected": expected.to_json(), "central": central}))
        .checked((tr - expected).norm(), o.tol_or(1e-9)))
}

pub fn rep_commutant_op(v: &Value, _o: &Opts) -> Outcome {
    let (rep, _) = grid_inputs(v)?;
    let dim = commutant_dimension(&rep)?;
    let mut r = Report::new("rep commutant", v, json!({"dim": dim}));
    r.pass = dim == 1;
    Ok(r)
}
