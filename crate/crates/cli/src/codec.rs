//! JSON encoding of scalars, matrices and domain objects.
//!
//! Matrices are nested row arrays. A 1×1 matrix may also be written as a bare
//! scalar and is emitted that way. Rationals are integers or `"p/q"` strings,
//! complex entries are `{"re": …, "im": …}`.

use lieorbit::heisenberg::{HeisDual, HeisElement, HeisLieElement};
use lieorbit::jacobi::{JacobiDual, JacobiElement, JacobiPoint};
use lieorbit::jacobi_forms::ThetaSpec;
use lieorbit::scalar::{fmt_rat, parse_rat, rat_to_f64, CRat, Rat};
use lieorbit::sl2::{Ambient, Sl2Triple};
use lieorbit::symplectic::SiegelPoint;
use lieorbit::{Matrix, Scalar};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

/// Malformed or schema-violating input.
#[derive(Debug, Clone)]
pub struct ParseError(pub String);

pub type Parsed<T> = std::result::Result<T, ParseError>;

fn perr<T>(msg: impl Into<String>) -> Parsed<T> {
    Err(ParseError(msg.into()))
}

pub trait JsonScalar: Scalar {
    fn from_json(v: &Value) -> Parsed<Self>;
    fn to_json(&self) -> Value;
}

fn rat_from_json(v: &Value) -> Parsed<Rat> {
    match v {
        // the decimal text of the number is parsed exactly, so 0.1 means 1/10
        Value::Number(n) => parse_rat(&n.to_string()).ok_or_else(|| ParseError(format!("not a finite decimal: {n}"))),
        Value::String(s) => parse_rat(s).ok_or_else(|| ParseError(format!("not a rational: {s:?}"))),
        other => perr(format!("expected a number or \"p/q\", got {other}")),
    }
}

fn f64_from_json(v: &Value) -> Parsed<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| ParseError(format!("not representable: {n}"))),
        Value::String(s) => {
            parse_rat(s).map(|r| rat_to_f64(&r)).ok_or_else(|| ParseError(format!("not a number: {s:?}")))
        }
        other => perr(format!("expected a number, got {other}")),
    }
}

fn complex_parts(v: &Value) -> Option<(&Value, &Value)> {
    let obj = v.as_object()?;
    Some((obj.get("re")?, obj.get("im")?))
}

impl JsonScalar for Rat {
    fn from_json(v: &Value) -> Parsed<Self> {
        rat_from_json(v)
    }

    fn to_json(&self) -> Value {
        if self.is_integer() {
            if let Ok(i) = self.numer().to_string().parse::<i64>() {
                return json!(i);
            }
        }
        json!(fmt_rat(self))
    }
}

impl JsonScalar for f64 {
    fn from_json(v: &Value) -> Parsed<Self> {
        f64_from_json(v)
    }

    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl JsonScalar for CRat {
    fn from_json(v: &Value) -> Parsed<Self> {
        match complex_parts(v) {
            Some((re, im)) => Ok(CRat::new(rat_from_json(re)?, rat_from_json(im)?)),
            None => Ok(CRat::new(rat_from_json(v)?, Rat::from_integer(0.into()))),
        }
    }

    fn to_json(&self) -> Value {
        json!({"re": self.re.to_json(), "im": self.im.to_json()})
    }
}

impl JsonScalar for Complex64 {
    fn from_json(v: &Value) -> Parsed<Self> {
        match complex_parts(v) {
            Some((re, im)) => Ok(Complex64::new(f64_from_json(re)?, f64_from_json(im)?)),
            None => Ok(Complex64::new(f64_from_json(v)?, 0.0)),
        }
    }

    fn to_json(&self) -> Value {
        json!({"re": self.re, "im": self.im})
    }
}

pub fn matrix_from_json<S: JsonScalar>(v: &Value) -> Parsed<Matrix<S>> {
    let Value::Array(rows) = v else {
        let s = S::from_json(v)?;
        return Ok(Matrix::from_fn(1, 1, |_, _| s.clone()));
    };
    let parsed: Vec<Vec<S>> = rows
        .iter()
        .map(|row| match row {
            Value::Array(entries) => entries.iter().map(S::from_json).collect(),
            other => perr(format!("matrix rows must be arrays, got {other}")),
        })
        .collect::<Parsed<_>>()?;
    if parsed.is_empty() {
        return perr("empty matrix");
    }
    Matrix::from_rows(parsed).map_err(|e| ParseError(e.to_string()))
}

pub fn matrix_to_json<S: JsonScalar>(m: &Matrix<S>) -> Value {
    if m.shape() == (1, 1) {
        return m[(0, 0)].to_json();
    }
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(S::to_json).collect())).collect())
}

/// Typed field access on a JSON object.
pub struct Fields<'a> {
    obj: &'a Map<String, Value>,
    ctx: &'a str,
}

impl<'a> Fields<'a> {
    pub fn of(v: &'a Value, ctx: &'a str) -> Parsed<Self> {
        match v.as_object() {
            Some(obj) => Ok(Fields { obj, ctx }),
            None => perr(format!("{ctx}: expected an object")),
        }
    }

    pub fn get(&self, key: &str) -> Parsed<&'a Value> {
        self.obj.get(key).ok_or_else(|| ParseError(format!("{}: missing field {key:?}", self.ctx)))
    }

    pub fn opt(&self, key: &str) -> Option<&'a Value> {
        self.obj.get(key).filter(|v| !v.is_null())
    }

    pub fn matrix<S: JsonScalar>(&self, key: &str) -> Parsed<Matrix<S>> {
        matrix_from_json(self.get(key)?).map_err(|e| ParseError(format!("{}.{key}: {}", self.ctx, e.0)))
    }

    pub fn usize(&self, key: &str) -> Parsed<usize> {
        self.get(key)?
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| ParseError(format!("{}.{key}: expected a non-negative integer", self.ctx)))
    }

    pub fn i64(&self, key: &str) -> Parsed<i64> {
        self.get(key)?.as_i64().ok_or_else(|| ParseError(format!("{}.{key}: expected an integer", self.ctx)))
    }

    pub fn f64(&self, key: &str) -> Parsed<f64> {
        f64_from_json(self.get(key)?).map_err(|e| ParseError(format!("{}.{key}: {}", self.ctx, e.0)))
    }

    pub fn str(&self, key: &str) -> Parsed<&'a str> {
        self.get(key)?.as_str().ok_or_else(|| ParseError(format!("{}.{key}: expected a string", self.ctx)))
    }

    pub fn int_rows(&self, key: &str) -> Parsed<Vec<Vec<i64>>> {
        serde_json::from_value(self.get(key)?.clone())
            .map_err(|e| ParseError(format!("{}.{key}: expected integer rows ({e})", self.ctx)))
    }
}

/// Library errors raised while assembling a value count as schema violations.
fn lib<T>(r: lieorbit::Result<T>, ctx: &str) -> Parsed<T> {
    r.map_err(|e| ParseError(format!("{ctx}: {e}")))
}

pub fn heis_from_json<S: JsonScalar>(v: &Value) -> Parsed<HeisElement<S>> {
    let f = Fields::of(v, "Heisenberg element")?;
    let x = lib(HeisElement::new(f.matrix("lambda")?, f.matrix("mu")?, f.matrix("kappa")?), "Heisenberg element")?;
    check_dims(&f, x.dims())?;
    Ok(x)
}

pub fn heis_to_json<S: JsonScalar>(x: &HeisElement<S>) -> Value {
    let (g, h) = x.dims();
    json!({
        "g": g,
        "h": h,
        "lambda": matrix_to_json(&x.lambda),
        "mu": matrix_to_json(&x.mu),
        "kappa": matrix_to_json(&x.kappa),
    })
}

fn check_dims(f: &Fields, (g, h): (usize, usize)) -> Parsed<()> {
    for (key, want) in [("g", g), ("h", h)] {
        if f.opt(key).is_some() && f.usize(key)? != want {
            return perr(format!("{}: {key} = {} disagrees with the matrix shapes ({want})", f.ctx, f.usize(key)?));
        }
    }
    Ok(())
}

pub fn heis_dual_from_json<S: JsonScalar>(v: &Value) -> Parsed<HeisDual<S>> {
    let f = Fields::of(v, "Heisenberg dual")?;
    let d = lib(HeisDual::new(f.matrix("a")?, f.matrix("b")?, f.matrix("c")?), "Heisenberg dual")?;
    check_dims(&f, d.dims())?;
    Ok(d)
}

pub fn heis_dual_to_json<S: JsonScalar>(d: &HeisDual<S>) -> Value {
    json!({"a": matrix_to_json(&d.a), "b": matrix_to_json(&d.b), "c": matrix_to_json(&d.c)})
}

pub fn heis_lie_from_json<S: JsonScalar>(v: &Value) -> Parsed<HeisLieElement<S>> {
    let f = Fields::of(v, "Heisenberg Lie element")?;
    lib(HeisLieElement::new(f.matrix("alpha")?, f.matrix("beta")?, f.matrix("gamma")?), "Heisenberg Lie element")
}

pub fn heis_lie_to_json<S: JsonScalar>(x: &HeisLieElement<S>) -> Value {
    json!({"alpha": matrix_to_json(&x.alpha), "beta": matrix_to_json(&x.beta), "gamma": matrix_to_json(&x.gamma)})
}

pub fn jacobi_from_json<S: JsonScalar>(v: &Value) -> Parsed<JacobiElement<S>> {
    let f = Fields::of(v, "Jacobi element")?;
    let heis = lib(HeisElement::new(f.matrix("lambda")?, f.matrix("mu")?, f.matrix("kappa")?), "Jacobi element")?;
    let g = lib(JacobiElement::new(f.matrix("M")?, heis), "Jacobi element")?;
    let (n, m) = g.dims();
    for (key, want) in [("n", n), ("m", m)] {
        if f.opt(key).is_some() && f.usize(key)? != want {
            return perr(format!("Jacobi element: {key} disagrees with the matrix shapes ({want})"));
        }
    }
    Ok(g)
}

pub fn jacobi_to_json<S: JsonScalar>(g: &JacobiElement<S>) -> Value {
    let (n, m) = g.dims();
    json!({
        "n": n,
        "m": m,
        "M": matrix_to_json(&g.m),
        "lambda": matrix_to_json(&g.heis.lambda),
        "mu": matrix_to_json(&g.heis.mu),
        "kappa": matrix_to_json(&g.heis.kappa),
    })
}

pub fn jacobi_dual_from_json<S: JsonScalar>(v: &Value) -> Parsed<JacobiDual<S>> {
    let f = Fields::of(v, "Jacobi dual")?;
    lib(
        JacobiDual::new(f.matrix("x")?, f.matrix("p")?, f.matrix("y")?, f.matrix("z")?, f.matrix("q")?, f.matrix("r")?),
        "Jacobi dual",
    )
}

pub fn jacobi_dual_to_json<S: JsonScalar>(d: &JacobiDual<S>) -> Value {
    json!({
        "x": matrix_to_json(&d.x),
        "p": matrix_to_json(&d.p),
        "y": matrix_to_json(&d.y),
        "z": matrix_to_json(&d.z),
        "q": matrix_to_json(&d.q),
        "r": matrix_to_json(&d.r),
    })
}

fn complex_matrix(f: &Fields, re: &str, im: &str) -> Parsed<Matrix<Complex64>> {
    let re: Matrix<f64> = f.matrix(re)?;
    let im: Matrix<f64> = match f.opt(im) {
        Some(_) => f.matrix(im)?,
        None => Matrix::zeros(re.rows(), re.cols()),
    };
    if re.shape() != im.shape() {
        return perr(format!("{}: real and imaginary parts differ in shape", f.ctx));
    }
    Ok(Matrix::from_parts(&re, &im))
}

pub fn siegel_from_json(v: &Value) -> Parsed<SiegelPoint> {
    let f = Fields::of(v, "Siegel point")?;
    lib(SiegelPoint::new(complex_matrix(&f, "Z_re", "Z_im")?), "Siegel point")
}

/// `{"Z_re", "Z_im", "W_re", "W_im"}`; `W` defaults to zero with `m = 1`.
pub fn point_from_json(v: &Value) -> Parsed<JacobiPoint> {
    let f = Fields::of(v, "Jacobi point")?;
    let z = siegel_from_json(v)?;
    let w = match f.opt("W_re") {
        Some(_) => complex_matrix(&f, "W_re", "W_im")?,
        None => Matrix::zeros(1, z.degree()),
    };
    lib(JacobiPoint::new(z, w), "Jacobi point")
}

pub fn point_to_json(p: &JacobiPoint) -> Value {
    json!({
        "Z_re": matrix_to_json(&p.z.re()),
        "Z_im": matrix_to_json(&p.z.im()),
        "W_re": matrix_to_json(&p.w.re()),
        "W_im": matrix_to_json(&p.w.im()),
    })
}

pub fn triple_from_json<S: JsonScalar>(v: &Value) -> Parsed<Sl2Triple<S>> {
    let f = Fields::of(v, "sl(2) triple")?;
    let ambient = ambient_from_json(&f)?;
    lib(Sl2Triple::new(f.matrix("H")?, f.matrix("X")?, f.matrix("Y")?, ambient), "sl(2) triple")
}

pub fn triple_to_json<S: JsonScalar>(t: &Sl2Triple<S>) -> Value {
    let mut out = json!({"H": matrix_to_json(&t.h), "X": matrix_to_json(&t.x), "Y": matrix_to_json(&t.y)});
    if let (Value::Object(o), Value::Object(a)) = (&mut out, serde_json::to_value(t.ambient).expect("plain enum")) {
        o.extend(a);
    }
    out
}

/// `{"ambient": "sl" | "sp", "n": k}`.
pub fn ambient_from_json(f: &Fields) -> Parsed<Ambient> {
    let n = f.usize("n")?;
    match f.str("ambient")? {
        "sl" => Ok(Ambient::Sl(n)),
        "sp" => Ok(Ambient::Sp(n)),
        other => perr(format!("ambient must be \"sl\" or \"sp\", got {other:?}")),
    }
}

pub fn theta_spec_from_json(v: &Value) -> Parsed<ThetaSpec> {
    let spec: ThetaSpec = serde_json::from_value(v.clone()).map_err(|e| ParseError(format!("theta spec: {e}")))?;
    lib(spec.validate().map(|_| spec.clone()), "theta spec")
}

/// Accepts a JSON document, `-` for standard input, or a path to a JSON file.
pub fn read_input(arg: Option<&str>) -> Parsed<Value> {
    let text = match arg {
        None => return Ok(Value::Object(Map::new())),
        Some("-") => {
            let mut s = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
                .map_err(|e| ParseError(format!("stdin: {e}")))?;
            s
        }
        Some(t) if t.trim_start().starts_with(['{', '[']) => t.to_string(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| ParseError(format!("{path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| ParseError(format!("invalid JSON: {e}")))
}
