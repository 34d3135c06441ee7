//! Constructors for the group families under study, each returning a
//! [`FiniteGroup`] with canonical element labels, plus the `FamilySpec`
//! text form used by the CLI and grid files (`family=dihedral;m=7`).

use std::fmt;

use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::group::{prime_power_base, FiniteGroup, GroupError};

#[derive(Debug, Error, PartialEq)]
pub enum CatalogError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("order {order} exceeds the cap of {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("cannot parse family spec: {0}")]
    Parse(String),
}

/// The two isomorphism types of non-abelian groups of order p^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtraspecialKind {
    /// Exponent p for odd p (unitriangular 3x3 over GF(p)); D_8 at p = 2.
    ExponentP,
    /// Exponent p^2 for odd p (metacyclic); Q_8 at p = 2.
    ExponentPSquared,
}

impl fmt::Display for ExtraspecialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtraspecialKind::ExponentP => write!(f, "exponent_p"),
            ExtraspecialKind::ExponentPSquared => write!(f, "exponent_p2"),
        }
    }
}

/// A parsed family identifier plus parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Dihedral { m: u32 },
    GeneralizedQuaternion { n: u32 },
    Quasidihedral { n: u32 },
    MetacyclicM { m: u32, n: u32 },
    Frobenius20,
    OrderPq { p: u32, q: u32 },
    ExtraspecialP3 { p: u32, kind: ExtraspecialKind },
    Psl2 { k: u32 },
    Gl2 { q: u32 },
    HanakiTheta { n: u32 },
    HanakiP { n: u32, p: u32 },
    Alternating5,
    Cyclic { n: u32 },
    AbelianProduct { orders: Vec<u32> },
    /// Direct product of a base family with an abelian group given by its
    /// cyclic factor orders.
    DirectProduct { base: Box<FamilySpec>, with: Vec<u32> },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl FamilySpec {
    /// Canonical text form, parseable by [`FamilySpec::parse`].
    pub fn to_text(&self) -> String {
        match self {
            FamilySpec::Dihedral { m } => format!("family=dihedral;m={m}"),
            FamilySpec::GeneralizedQuaternion { n } => {
                format!("family=generalized_quaternion;n={n}")
            }
            FamilySpec::Quasidihedral { n } => format!("family=quasidihedral;n={n}"),
            FamilySpec::MetacyclicM { m, n } => format!("family=metacyclic;m={m};n={n}"),
            FamilySpec::Frobenius20 => "family=frobenius20".into(),
            FamilySpec::OrderPq { p, q } => format!("family=order_pq;p={p};q={q}"),
            FamilySpec::ExtraspecialP3 { p, kind } => {
                format!("family=extraspecial_p3;p={p};type={kind}")
            }
            FamilySpec::Psl2 { k } => format!("family=psl2;k={k}"),
            FamilySpec::Gl2 { q } => format!("family=gl2;q={q}"),
            FamilySpec::HanakiTheta { n } => format!("family=hanaki_theta;n={n}"),
            FamilySpec::HanakiP { n, p } => format!("family=hanaki_p;n={n};p={p}"),
            FamilySpec::Alternating5 => "family=alternating5".into(),
            FamilySpec::Cyclic { n } => format!("family=cyclic;n={n}"),
            FamilySpec::AbelianProduct { orders } => {
                format!("family=abelian_product;orders={}", join_orders(orders))
            }
            FamilySpec::DirectProduct { base, with } => {
                let inner = base.to_text();
                let inner = inner.strip_prefix("family=").unwrap_or(&inner);
                let (head, params) = match inner.split_once(';') {
                    Some((h, rest)) => (h.to_string(), format!(";{rest}")),
                    None => (inner.to_string(), String::new()),
                };
                format!("family=direct_product;base={head}{params};with={}", join_orders(with))
            }
        }
    }

    /// Parses the text form. Key order is free; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<FamilySpec, CatalogError> {
        let mut family = None;
        let mut base = None;
        let mut with = None;
        let mut orders = None;
        let mut kind = None;
        let mut nums: Vec<(String, u32)> = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| CatalogError::Parse(format!("expected key=value, got `{part}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "family" => family = Some(value.to_string()),
                "base" => base = Some(value.to_string()),
                "with" => with = Some(parse_orders(value)?),
                "orders" => orders = Some(parse_orders(value)?),
                "type" => kind = Some(parse_kind(value)?),
                "m" | "n" | "p" | "q" | "k" => {
                    let v: u32 = value
                        .parse()
                        .map_err(|_| CatalogError::Parse(format!("bad integer `{value}`")))?;
                    nums.push((key.to_string(), v));
                }
                other => {
                    return Err(CatalogError::Parse(format!("unknown key `{other}`")));
                }
            }
        }
        let family = family.ok_or_else(|| CatalogError::Parse("missing family=".into()))?;
        let get = |name: &str| -> Result<u32, CatalogError> {
            nums.iter()
                .find(|(k, _)| k == name)
                .map(|&(_, v)| v)
                .ok_or_else(|| CatalogError::Parse(format!("{family} requires {name}=")))
        };
        let spec = match family.as_str() {
            "dihedral" => FamilySpec::Dihedral { m: get("m")? },
            "generalized_quaternion" => FamilySpec::GeneralizedQuaternion { n: get("n")? },
            "quasidihedral" => FamilySpec::Quasidihedral { n: get("n")? },
            "metacyclic" | "metacyclic_m" => FamilySpec::MetacyclicM {
                m: get("m")?,
                n: get("n")?,
            },
            "frobenius20" => FamilySpec::Frobenius20,
            "order_pq" => FamilySpec::OrderPq {
                p: get("p")?,
                q: get("q")?,
            },
            "extraspecial_p3" => FamilySpec::ExtraspecialP3 {
                p: get("p")?,
                kind: kind.ok_or_else(|| {
                    CatalogError::Parse("extraspecial_p3 requires type=".into())
                })?,
            },
            "psl2" => FamilySpec::Psl2 { k: get("k")? },
            "gl2" => FamilySpec::Gl2 { q: get("q")? },
            "hanaki_theta" => FamilySpec::HanakiTheta { n: get("n")? },
            "hanaki_p" => FamilySpec::HanakiP {
                n: get("n")?,
                p: get("p")?,
            },
            "alternating5" => FamilySpec::Alternating5,
            "cyclic" => FamilySpec::Cyclic { n: get("n")? },
            "abelian_product" => FamilySpec::AbelianProduct {
                orders: orders
                    .ok_or_else(|| CatalogError::Parse("abelian_product requires orders=".into()))?,
            },
            "direct_product" => {
                let base_name =
                    base.ok_or_else(|| CatalogError::Parse("direct_product requires base=".into()))?;
                let mut inner = format!("family={base_name}");
                for (k, v) in &nums {
                    inner.push_str(&format!(";{k}={v}"));
                }
                if let Some(k) = kind {
                    inner.push_str(&format!(";type={k}"));
                }
                FamilySpec::DirectProduct {
                    base: Box::new(FamilySpec::parse(&inner)?),
                    with: with
                        .ok_or_else(|| CatalogError::Parse("direct_product requires with=".into()))?,
                }
            }
            other => return Err(CatalogError::Parse(format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }

    /// Closed-form order of the group this spec describes, used to decide
    /// whether construction fits under a cap without building anything.
    pub fn expected_order(&self) -> Result<usize, CatalogError> {
        self.validate()?;
        Ok(match self {
            FamilySpec::Dihedral { m } => 2 * *m as usize,
            FamilySpec::GeneralizedQuaternion { n } => 4 * *n as usize,
            FamilySpec::Quasidihedral { n } => 1usize << *n,
            FamilySpec::MetacyclicM { m, n } => 2 * *m as usize * *n as usize,
            FamilySpec::Frobenius20 => 20,
            FamilySpec::OrderPq { p, q } => *p as usize * *q as usize,
            FamilySpec::ExtraspecialP3 { p, .. } => (*p as usize).pow(3),
            FamilySpec::Psl2 { k } => {
                let q = 1usize << *k;
                q * (q * q - 1)
            }
            FamilySpec::Gl2 { q } => {
                let q = *q as usize;
                (q * q - 1) * (q * q - q)
            }
            FamilySpec::HanakiTheta { n } => 1usize << (2 * *n),
            FamilySpec::HanakiP { n, p } => (*p as usize).pow(3 * *n),
            FamilySpec::Alternating5 => 60,
            FamilySpec::Cyclic { n } => *n as usize,
            FamilySpec::AbelianProduct { orders } => {
                orders.iter().map(|&o| o as usize).product()
            }
            FamilySpec::DirectProduct { base, with } => {
                base.expected_order()? * with.iter().map(|&o| o as usize).product::<usize>()
            }
        })
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let bad = |msg: String| Err(CatalogError::Parameter(msg));
        match self {
            FamilySpec::Dihedral { m } if *m < 3 => bad(format!("dihedral requires m >= 3, got {m}")),
            FamilySpec::GeneralizedQuaternion { n } if *n < 2 => {
                bad(format!("generalized_quaternion requires n >= 2, got {n}"))
            }
            FamilySpec::Quasidihedral { n } if *n < 4 => {
                bad(format!("quasidihedral requires n >= 4, got {n}"))
            }
            FamilySpec::MetacyclicM { m, n } if *m <= 2 || *n < 1 => {
                bad(format!("metacyclic requires m > 2 and n >= 1, got m={m}, n={n}"))
            }
            FamilySpec::OrderPq { p, q } => {
                if !is_prime(*p) || !is_prime(*q) {
                    return bad(format!("order_pq requires primes, got p={p}, q={q}"));
                }
                if (*q - 1) % *p != 0 {
                    return bad(format!("order_pq requires p | q - 1, got p={p}, q={q}"));
                }
                Ok(())
            }
            FamilySpec::ExtraspecialP3 { p, .. } if !is_prime(*p) => {
                bad(format!("extraspecial_p3 requires a prime, got {p}"))
            }
            FamilySpec::Psl2 { k } if *k < 1 => bad("psl2 requires k >= 1".into()),
            FamilySpec::Gl2 { q } => {
                if *q <= 2 || prime_power_base(*q as usize).is_none() {
                    return bad(format!("gl2 requires a prime power q > 2, got {q}"));
                }
                Ok(())
            }
            FamilySpec::HanakiTheta { n } if *n < 2 => {
                bad(format!("hanaki_theta requires n >= 2, got {n}"))
            }
            FamilySpec::HanakiP { n, p } => {
                if *n < 1 || !is_prime(*p) {
                    return bad(format!("hanaki_p requires n >= 1 and prime p, got n={n}, p={p}"));
                }
                Ok(())
            }
            FamilySpec::Cyclic { n } if *n < 1 => bad("cyclic requires n >= 1".into()),
            FamilySpec::AbelianProduct { orders } if orders.iter().any(|&o| o < 1) => {
                bad("abelian_product orders must be >= 1".into())
            }
            FamilySpec::DirectProduct { base, with } => {
                base.validate()?;
                if with.iter().any(|&o| o < 1) {
                    return bad("direct_product abelian factors must be >= 1".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Builds the group, enforcing the order cap.
    pub fn construct(&self, cap: usize) -> Result<FiniteGroup, CatalogError> {
        let order = self.expected_order()?;
        if order > cap {
            return Err(CatalogError::OrderCap { order, cap });
        }
        match self {
            FamilySpec::Dihedral { m } => dihedral(*m, cap),
            FamilySpec::GeneralizedQuaternion { n } => generalized_quaternion(*n, cap),
            FamilySpec::Quasidihedral { n } => quasidihedral(*n, cap),
            FamilySpec::MetacyclicM { m, n } => metacyclic_m(*m, *n, cap),
            FamilySpec::Frobenius20 => frobenius20(cap),
            FamilySpec::OrderPq { p, q } => order_pq(*p, *q, cap),
            FamilySpec::ExtraspecialP3 { p, kind } => extraspecial_p3(*p, *kind, cap),
            FamilySpec::Psl2 { k } => psl2_2k(*k, cap),
            FamilySpec::Gl2 { q } => gl2(*q, cap),
            FamilySpec::HanakiTheta { n } => hanaki_theta(*n, cap),
            FamilySpec::HanakiP { n, p } => hanaki_p(*n, *p, cap),
            FamilySpec::Alternating5 => alternating5(cap),
            FamilySpec::Cyclic { n } => abelian(&[*n], cap),
            FamilySpec::AbelianProduct { orders } => abelian(orders, cap),
            FamilySpec::DirectProduct { base, with } => {
                let g = base.construct(cap)?;
                let a = abelian(with, cap)?;
                Ok(g.direct_product(&a, cap)?)
            }
        }
    }
}

fn join_orders(orders: &[u32]) -> String {
    orders
        .iter()
        .map(|o| o.to_string())
        .collect::<Vec<_>>()
        .join("x")
}

fn parse_orders(text: &str) -> Result<Vec<u32>, CatalogError> {
    text.split('x')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CatalogError::Parse(format!("bad order list `{text}`")))
        })
        .collect()
}

fn parse_kind(text: &str) -> Result<ExtraspecialKind, CatalogError> {
    match text {
        "exponent_p" | "exponent-p" => Ok(ExtraspecialKind::ExponentP),
        "exponent_p2" | "exponent-p2" | "exponent_p^2" => Ok(ExtraspecialKind::ExponentPSquared),
        other => Err(CatalogError::Parse(format!("unknown extraspecial type `{other}`"))),
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Groups presented as `<a, b : a^M = 1, b^K = a^s, b a b^-1 = a^r>`,
/// materialized on the normal forms a^i b^j. Consistency requires
/// r^K = 1 and s(r - 1) = 0 mod M.
fn word_group(
    m: usize,
    k: usize,
    r: usize,
    s: usize,
    a_name: &str,
    b_name: &str,
) -> Result<FiniteGroup, CatalogError> {
    debug_assert!(mod_pow(r, k, m) == 1 % m, "r^K must be 1 mod M");
    debug_assert!(s * (r + m - 1) % m == 0, "a^s must be fixed by conjugation");
    let mut rpow = vec![1usize % m; k];
    for j in 1..k {
        rpow[j] = rpow[j - 1] * r % m;
    }
    let n = m * k;
    let mut labels = Vec::with_capacity(n);
    for i in 0..m {
        for j in 0..k {
            labels.push(word_label(a_name, i, b_name, j));
        }
    }
    let mut mul = vec![0u16; n * n];
    for i1 in 0..m {
        for j1 in 0..k {
            let x = i1 * k + j1;
            for i2 in 0..m {
                for j2 in 0..k {
                    let y = i2 * k + j2;
                    // a^i1 b^j1 a^i2 b^j2 = a^(i1 + i2 r^j1) b^(j1+j2), with
                    // b^K = a^s folded in when the b-exponent wraps.
                    let wrap = if j1 + j2 >= k { s } else { 0 };
                    let i = (i1 + i2 * rpow[j1] + wrap) % m;
                    let j = (j1 + j2) % k;
                    mul[x * n + y] = (i * k + j) as u16;
                }
            }
        }
    }
    Ok(FiniteGroup::from_table(labels, mul)?)
}

fn word_label(a: &str, i: usize, b: &str, j: usize) -> String {
    let part = |name: &str, e: usize| match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    };
    let (pa, pb) = (part(a, i), part(b, j));
    match (pa.is_empty(), pb.is_empty()) {
        (true, true) => "1".into(),
        (false, true) => pa,
        (true, false) => pb,
        (false, false) => format!("{pa}*{pb}"),
    }
}

/// Dihedral group of order 2m, m >= 3.
pub fn dihedral(m: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    FamilySpec::Dihedral { m }.expected_order().and_then(|o| cap_check(o, cap))?;
    word_group(m as usize, 2, m as usize - 1, 0, "a", "b")
}

/// Generalized quaternion group of order 4n, n >= 2:
/// `<x, y : y^(2n) = 1, x^2 = y^n, x y x^-1 = y^-1>`.
pub fn generalized_quaternion(n: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    FamilySpec::GeneralizedQuaternion { n }
        .expected_order()
        .and_then(|o| cap_check(o, cap))?;
    let m = 2 * n as usize;
    word_group(m, 2, m - 1, n as usize, "y", "x")
}

/// Quasidihedral group of order 2^n, n >= 4:
/// `<a, b : a^(2^(n-1)) = b^2 = 1, b a b^-1 = a^(2^(n-2) - 1)>`.
pub fn quasidihedral(n: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    FamilySpec::Quasidihedral { n }.expected_order().and_then(|o| cap_check(o, cap))?;
    let m = 1usize << (n - 1);
    word_group(m, 2, (1usize << (n - 2)) - 1, 0, "a", "b")
}

/// Metacyclic group of order 2mn, m > 2:
/// `<a, b : a^m = b^(2n) = 1, b a b^-1 = a^-1>`.
pub fn metacyclic_m(m: u32, n: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    FamilySpec::MetacyclicM { m, n }.expected_order().and_then(|o| cap_check(o, cap))?;
    word_group(m as usize, 2 * n as usize, m as usize - 1, 0, "a", "b")
}

/// The Frobenius group of order 20 (Suzuki group Sz(2)):
/// `<a, b : a^5 = b^4 = 1, b^-1 a b = a^2>`.
pub fn frobenius20(cap: usize) -> Result<FiniteGroup, CatalogError> {
    cap_check(20, cap)?;
    // b^-1 a b = a^2 is equivalent to b a b^-1 = a^3.
    word_group(5, 4, 3, 0, "a", "b")
}

/// The non-abelian group of order pq for primes p | q - 1.
pub fn order_pq(p: u32, q: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    let spec = FamilySpec::OrderPq { p, q };
    spec.expected_order().and_then(|o| cap_check(o, cap))?;
    // Smallest r of multiplicative order p mod q drives the semidirect action.
    let r = (2..q as usize)
        .find(|&r| {
            mod_pow(r, p as usize, q as usize) == 1
                && (1..p as usize).all(|e| mod_pow(r, e, q as usize) != 1)
        })
        .expect("p | q - 1 guarantees an element of order p");
    word_group(q as usize, p as usize, r, 0, "a", "b")
}

/// The two non-abelian groups of order p^3.
pub fn extraspecial_p3(
    p: u32,
    kind: ExtraspecialKind,
    cap: usize,
) -> Result<FiniteGroup, CatalogError> {
    let spec = FamilySpec::ExtraspecialP3 { p, kind };
    spec.expected_order().and_then(|o| cap_check(o, cap))?;
    match (kind, p) {
        (ExtraspecialKind::ExponentP, _) => {
            // Unitriangular 3x3 matrices over GF(p), generated by the two
            // elementary transvections.
            let f = FieldSpec::new(p, 1)?;
            let e21 = unitriangular(&f, &f.one(), &f.zero(), &f.zero());
            let e32 = unitriangular(&f, &f.zero(), &f.zero(), &f.one());
            matrix_group(&f, 3, &[e21, e32], cap)
        }
        (ExtraspecialKind::ExponentPSquared, 2) => generalized_quaternion(2, cap),
        (ExtraspecialKind::ExponentPSquared, _) => {
            let m = (p * p) as usize;
            word_group(m, p as usize, 1 + p as usize, 0, "a", "b")
        }
    }
}

fn unitriangular(f: &FieldSpec, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> Vec<FieldElement> {
    vec![
        f.one(), f.zero(), f.zero(),
        a.clone(), f.one(), f.zero(),
        b.clone(), c.clone(), f.one(),
    ]
}

/// PSL(2, 2^k) built as SL(2, 2^k); in characteristic 2 the center of SL_2
/// is trivial, so no quotient step is needed. k = 1 yields S_3.
pub fn psl2_2k(k: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    let spec = FamilySpec::Psl2 { k };
    spec.expected_order().and_then(|o| cap_check(o, cap))?;
    let f = FieldSpec::new(2, k)?;
    // Transvections over a basis of GF(2^k) generate SL(2, 2^k).
    let mut gens = Vec::new();
    for i in 0..k {
        let x = f.from_code(1 << i);
        gens.push(vec![f.one(), x.clone(), f.zero(), f.one()]);
        gens.push(vec![f.one(), f.zero(), x, f.one()]);
    }
    matrix_group(&f, 2, &gens, cap)
}

/// GL(2, q) for a prime power q > 2, by generator closure.
pub fn gl2(q: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    let spec = FamilySpec::Gl2 { q };
    spec.expected_order().and_then(|o| cap_check(o, cap))?;
    let p = prime_power_base(q as usize).expect("validated prime power");
    let n = (q as f64).log(p as f64).round() as u32;
    let f = FieldSpec::new(p, n)?;
    debug_assert_eq!(f.size(), q as usize);
    let g = f.primitive_element();
    let gens = vec![
        vec![f.one(), f.one(), f.zero(), f.one()],
        vec![f.one(), f.zero(), f.one(), f.one()],
        vec![g, f.zero(), f.zero(), f.one()],
    ];
    matrix_group(&f, 2, &gens, cap)
}

/// The order-2^(2n) group of lower unitriangular matrices U(a, b) with
/// Frobenius twist, under U(a,b) U(a',b') = U(a + a', b + b' + a' a^2).
pub fn hanaki_theta(n: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    let spec = FamilySpec::HanakiTheta { n };
    spec.expected_order().and_then(|o| cap_check(o, cap))?;
    let f = FieldSpec::new(2, n)?;
    let size = f.size();
    let total = size * size;
    let elems: Vec<(FieldElement, FieldElement)> = (0..total)
        .map(|idx| (f.from_code(idx / size), f.from_code(idx % size)))
        .collect();
    let labels = elems
        .iter()
        .map(|(a, b)| format!("U({},{})", f.code(a), f.code(b)))
        .collect();
    let mut mul = vec![0u16; total * total];
    for (x, (a, b)) in elems.iter().enumerate() {
        let twist = f.frobenius(a);
        for (y, (a2, b2)) in elems.iter().enumerate() {
            let na = f.add(a, a2);
            let nb = f.add(&f.add(b, b2), &f.mul(a2, &twist));
            mul[x * total + y] = (f.code(&na) * size + f.code(&nb)) as u16;
        }
    }
    Ok(FiniteGroup::from_table(labels, mul)?)
}

/// The order-p^(3n) group of lower unitriangular matrices V(a, b, c) over
/// GF(p^n), under V(a,b,c) V(a',b',c') = V(a + a', b + b' + c a', c + c').
pub fn hanaki_p(n: u32, p: u32, cap: usize) -> Result<FiniteGroup, CatalogError> {
    let spec = FamilySpec::HanakiP { n, p };
    spec.expected_order().and_then(|o| cap_check(o, cap))?;
    let f = FieldSpec::new(p, n)?;
    let size = f.size();
    let total = size * size * size;
    let elems: Vec<(FieldElement, FieldElement, FieldElement)> = (0..total)
        .map(|idx| {
            (
                f.from_code(idx / (size * size)),
                f.from_code(idx / size % size),
                f.from_code(idx % size),
            )
        })
        .collect();
    let labels = elems
        .iter()
        .map(|(a, b, c)| format!("V({},{},{})", f.code(a), f.code(b), f.code(c)))
        .collect();
    let mut mul = vec![0u16; total * total];
    for (x, (a, b, c)) in elems.iter().enumerate() {
        for (y, (a2, b2, c2)) in elems.iter().enumerate() {
            let na = f.add(a, a2);
            let nb = f.add(&f.add(b, b2), &f.mul(c, a2));
            let nc = f.add(c, c2);
            let idx = (f.code(&na) * size + f.code(&nb)) * size + f.code(&nc);
            mul[x * total + y] = idx as u16;
        }
    }
    Ok(FiniteGroup::from_table(labels, mul)?)
}

/// The alternating group A_5, by permutation closure.
pub fn alternating5(cap: usize) -> Result<FiniteGroup, CatalogError> {
    cap_check(60, cap)?;
    let identity: Vec<u8> = (0..5).collect();
    let five_cycle: Vec<u8> = vec![1, 2, 3, 4, 0];
    let three_cycle: Vec<u8> = vec![1, 2, 0, 3, 4];
    let g = FiniteGroup::closure_from_generators(
        identity,
        &[five_cycle, three_cycle],
        |a, b| a.iter().map(|&x| b[x as usize]).collect(),
        perm_cycle_label,
        cap,
    )?;
    debug_assert_eq!(g.order(), 60);
    Ok(g)
}

/// Direct product of cyclic groups of the given orders.
pub fn abelian(orders: &[u32], cap: usize) -> Result<FiniteGroup, CatalogError> {
    let spec = FamilySpec::AbelianProduct {
        orders: orders.to_vec(),
    };
    let total = spec.expected_order()?;
    cap_check(total, cap)?;
    let radices: Vec<usize> = orders.iter().map(|&o| o as usize).collect();
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut t = vec![0usize; radices.len()];
        for (slot, &r) in t.iter_mut().zip(&radices).rev() {
            *slot = idx % r;
            idx /= r;
        }
        t
    };
    let encode = |t: &[usize]| -> usize {
        t.iter()
            .zip(&radices)
            .fold(0usize, |acc, (&d, &r)| acc * r + d)
    };
    let labels = (0..total)
        .map(|i| {
            let digits = decode(i);
            format!(
                "({})",
                digits
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    let mut mul = vec![0u16; total * total];
    for x in 0..total {
        let dx = decode(x);
        for y in 0..total {
            let dy = decode(y);
            let sum: Vec<usize> = dx
                .iter()
                .zip(&dy)
                .zip(&radices)
                .map(|((&a, &b), &r)| (a + b) % r)
                .collect();
            mul[x * total + y] = encode(&sum) as u16;
        }
    }
    Ok(FiniteGroup::from_table(labels, mul)?)
}

/// Closure of matrix generators over a finite field.
fn matrix_group(
    f: &FieldSpec,
    dim: usize,
    gens: &[Vec<FieldElement>],
    cap: usize,
) -> Result<FiniteGroup, CatalogError> {
    let identity: Vec<FieldElement> = (0..dim * dim)
        .map(|i| if i / dim == i % dim { f.one() } else { f.zero() })
        .collect();
    let compose = |x: &Vec<FieldElement>, y: &Vec<FieldElement>| -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = f.zero();
                for t in 0..dim {
                    acc = f.add(&acc, &f.mul(&x[r * dim + t], &y[t * dim + c]));
                }
                out.push(acc);
            }
        }
        out
    };
    let label = |mat: &Vec<FieldElement>| -> String {
        let rows: Vec<String> = (0..dim)
            .map(|r| {
                let entries: Vec<String> = (0..dim)
                    .map(|c| f.code(&mat[r * dim + c]).to_string())
                    .collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    };
    Ok(FiniteGroup::closure_from_generators(
        identity,
        gens,
        compose,
        label,
        cap,
    )?)
}

fn perm_cycle_label(p: &Vec<u8>) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut cur = start;
        let mut first = true;
        while !seen[cur] {
            seen[cur] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&cur.to_string());
            first = false;
            cur = p[cur] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

fn cap_check(order: usize, cap: usize) -> Result<(), CatalogError> {
    if order > cap {
        Err(CatalogError::OrderCap { order, cap })
    } else {
        Ok(())
    }
}

fn mod_pow(mut b: usize, mut e: usize, m: usize) -> usize {
    if m == 1 {
        return 0;
    }
    let mut acc = 1usize;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}
