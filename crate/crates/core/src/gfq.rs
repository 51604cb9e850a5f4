//! Finite fields GF(q), GF(q^2) and GF(q^3) built as explicit extension
//! towers over a prime field.
//!
//! Every element is stored as its index in the polynomial basis of its
//! field: an element `a_0 + a_1 x + ... + a_{d-1} x^{d-1}` of an extension
//! of degree `d` over a subfield of order `s` has index `sum a_i s^i`. Two
//! consequences are used throughout the crate:
//!
//! - the subfield embeds into the extension as the identity on indices, so
//!   a `GF(q)` element can be handed to `GF(q^3)` arithmetic unchanged;
//! - [`FieldTower::coords`] is a plain base-`q` digit split.
//!
//! Multiplication goes through log/antilog tables, addition is digit-wise
//! modulo `p` (XOR for `p = 2`).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::FieldError;

/// An element of one level of the tower, identified by its polynomial-basis
/// index. The field it belongs to is carried by the caller.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Largest field order the tables are built for.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Clone, Debug)]
enum AddRule {
    Xor,
    Table(Vec<u32>),
    Digits,
}

/// A finite field with precomputed multiplicative tables.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    order: u32,
    sub_order: u32,
    degree: u32,
    add: AddRule,
    neg: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digit_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn digit_neg(p: u32, mut a: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 {
        out += ((p - a % p) % p) * place;
        a /= p;
        place *= p;
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::RejectsNonPrime(p));
        }
        if p > MAX_FIELD_ORDER {
            return Err(FieldError::Unsupported(p));
        }
        let add = Self::add_rule(p, p);
        let neg = (0..p).map(|a| (p - a) % p).collect();
        let mut field = Field {
            p,
            order: p,
            sub_order: p,
            degree: 1,
            add,
            neg,
            exp: Vec::new(),
            log: Vec::new(),
            frob: (0..p).collect(),
        };
        let mul = |a: u32, b: u32| ((a as u64 * b as u64) % p as u64) as u32;
        let gen = (1..p)
            .find(|&g| Self::cycle_len(p, g, mul) == p - 1)
            .ok_or(FieldError::RejectsReducible("prime field"))?;
        field.fill_logs(gen, mul);
        Ok(field)
    }

    /// Extension of `sub` by a root `x` of `x^d = rule[0] + rule[1] x + ...
    /// + rule[d-1] x^{d-1}`.
    ///
    /// Fails with `RejectsReducible` when the quotient ring is not a field.
    pub fn extension(sub: &Field, rule: &[Elem], what: &'static str) -> Result<Field, FieldError> {
        let d = rule.len() as u32;
        assert!(d >= 1, "extension degree must be positive");
        let s = sub.order;
        let n = s
            .checked_pow(d)
            .filter(|&n| n <= MAX_FIELD_ORDER)
            .ok_or(FieldError::Unsupported(s))?;
        if rule.iter().any(|c| c.0 >= s) {
            return Err(FieldError::WrongLevel);
        }
        if d <= 3 {
            // A polynomial of degree at most three is irreducible iff it has no root.
            let has_root = sub.elements().any(|a| {
                let mut v = sub.one();
                for _ in 0..d {
                    v = sub.mul(v, a);
                }
                let mut rhs = Elem::ZERO;
                let mut pw = sub.one();
                for &c in rule {
                    rhs = sub.add(rhs, sub.mul(c, pw));
                    pw = sub.mul(pw, a);
                }
                v == rhs
            });
            if has_root {
                return Err(FieldError::RejectsReducible(what));
            }
        }
        let p = sub.p;
        let digits = |mut a: u32| -> Vec<Elem> {
            let mut out = vec![Elem::ZERO; d as usize];
            for slot in out.iter_mut() {
                *slot = Elem(a % s);
                a /= s;
            }
            out
        };
        let mul = |a: u32, b: u32| -> u32 {
            let da = digits(a);
            let db = digits(b);
            let mut prod = vec![Elem::ZERO; 2 * d as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = sub.add(prod[i + j], sub.mul(x, y));
                }
            }
            for k in (d as usize..prod.len()).rev() {
                let top = prod[k];
                if top.is_zero() {
                    continue;
                }
                prod[k] = Elem::ZERO;
                for (i, &r) in rule.iter().enumerate() {
                    let tgt = k - d as usize + i;
                    prod[tgt] = sub.add(prod[tgt], sub.mul(top, r));
                }
            }
            let mut out = 0u32;
            for k in (0..d as usize).rev() {
                out = out * s + prod[k].0;
            }
            out
        };
        // x itself first, then every other element in index order.
        let gen = core::iter::once(s.min(n - 1))
            .chain(2..n)
            .find(|&g| g != 0 && Self::cycle_len(n, g, mul) == n - 1)
            .ok_or(FieldError::RejectsReducible(what))?;
        let mut field = Field {
            p,
            order: n,
            sub_order: s,
            degree: d,
            add: Self::add_rule(p, n),
            neg: (0..n).map(|a| digit_neg(p, a)).collect(),
            exp: Vec::new(),
            log: Vec::new(),
            frob: Vec::new(),
        };
        field.fill_logs(gen, mul);
        field.frob = (0..n).map(|a| field.pow(Elem(a), s as u64).0).collect();
        Ok(field)
    }

    fn add_rule(p: u32, n: u32) -> AddRule {
        if p == 2 {
            AddRule::Xor
        } else if n <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (n * n) as usize];
            for a in 0..n {
                for b in 0..n {
                    t[(a * n + b) as usize] = digit_add(p, a, b);
                }
            }
            AddRule::Table(t)
        } else {
            AddRule::Digits
        }
    }

    fn cycle_len(n: u32, g: u32, mul: impl Fn(u32, u32) -> u32) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = mul(x, g);
            k += 1;
            if k > n {
                return 0;
            }
        }
        k
    }

    fn fill_logs(&mut self, gen: u32, mul: impl Fn(u32, u32) -> u32) {
        let m = self.order - 1;
        self.exp = Vec::with_capacity(m as usize);
        self.log = vec![u32::MAX; self.order as usize];
        let mut x = 1u32;
        for i in 0..m {
            self.exp.push(x);
            self.log[x as usize] = i;
            x = mul(x, gen);
        }
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Order of the field this one was built over (itself for a prime field).
    #[inline]
    pub fn sub_order(&self) -> u32 {
        self.sub_order
    }

    /// Degree over the field this one was built over.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.order).map(Elem)
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.order
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add {
            AddRule::Xor => Elem(a.0 ^ b.0),
            AddRule::Table(t) => Elem(t[(a.0 * self.order + b.0) as usize]),
            AddRule::Digits => Elem(digit_add(self.p, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let m = self.order - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[(if s >= m { s - m } else { s }) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let m = self.order - 1;
        let l = self.log[a.0 as usize];
        Elem(self.exp[((m - l) % m) as usize])
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let m = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.exp[((l * (e % m)) % m) as usize])
    }

    /// Discrete log with respect to the internal generator.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// The internal primitive element raised to `k`.
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.order as u64 - 1)) as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> u64 {
        let m = (self.order - 1) as u64;
        m / gcd(self.log[a.0 as usize] as u64, m)
    }

    /// `a^s` where `s` is the order of the subfield this field extends.
    #[inline]
    pub fn frobenius(&self, a: Elem) -> Elem {
        Elem(self.frob[a.0 as usize])
    }

    pub fn from_int(&self, k: i64) -> Elem {
        let p = self.p as i64;
        Elem((((k % p) + p) % p) as u32)
    }

    pub fn sum(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Base-`p` digits of an element, most significant first, padded to the
    /// full length of the field.
    pub fn to_digits(&self, a: Elem) -> String {
        let mut len = 0;
        let mut n = 1u32;
        while n < self.order {
            n *= self.p;
            len += 1;
        }
        let mut digits = vec![0u8; len.max(1)];
        let mut v = a.0;
        for slot in digits.iter_mut().rev() {
            *slot = b"0123456789abcdefghijklmnopqrstuvwxyz"[(v % self.p) as usize];
            v /= self.p;
        }
        String::from_utf8(digits).expect("ascii digits")
    }

    pub fn parse_digits(&self, s: &str) -> Result<Elem, FieldError> {
        let mut v: u64 = 0;
        if s.is_empty() {
            return Err(FieldError::Parse(String::from("empty digit string")));
        }
        for ch in s.chars() {
            let d = ch
                .to_digit(36)
                .filter(|&d| d < self.p)
                .ok_or_else(|| FieldError::Parse(alloc::format!("bad base-{} digit {:?}", self.p, ch)))?;
            v = v * self.p as u64 + d as u64;
            if v >= self.order as u64 {
                return Err(FieldError::Parse(alloc::format!("digit string {:?} out of range", s)));
            }
        }
        Ok(Elem(v as u32))
    }
}

/// Defining data of a tower `GF(p) ⊆ GF(q) ⊆ GF(q^2), GF(q^3)`.
///
/// All polynomials are given as reduction rules `x^d = r_0 + r_1 x + ... +
/// r_{d-1} x^{d-1}`; for the cubic this is `(t0, t1, t2)` of
/// `x^3 - t2 x^2 - t1 x - t0`, and for the quadratic `(c0, c1)` of
/// `x^2 - c1 x - c0`. Coefficients are indices in GF(p) (`base_rule`) or
/// GF(q) (`cubic`, `quad`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub base_rule: Vec<u32>,
    pub cubic: [u32; 3],
    pub quad: [u32; 2],
}

/// Decompose a prime power; `None` when `q` is not one.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

impl FieldSpec {
    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }

    fn base_field(p: u32, e: u32, base_rule: &[u32]) -> Result<Field, FieldError> {
        let prime = Field::prime(p)?;
        if e == 1 {
            return Ok(prime);
        }
        let rule: Vec<Elem> = base_rule.iter().map(|&c| Elem(c)).collect();
        if rule.len() != e as usize {
            return Err(FieldError::Parse(alloc::format!("base rule needs {} coefficients", e)));
        }
        Field::extension(&prime, &rule, "base polynomial")
    }

    /// The default spec for `q`: for each polynomial the first admissible
    /// coefficient vector in lexicographic order, most significant
    /// coefficient first.
    pub fn default_for(q: u32) -> Result<FieldSpec, FieldError> {
        Self::admissible(q, 0)
    }

    /// The `index`-th admissible cubic (in the same order as
    /// [`FieldSpec::default_for`]) with the default base and quadratic
    /// polynomials. Used to rerun property suites under other choices of τ.
    pub fn admissible(q: u32, index: usize) -> Result<FieldSpec, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::RejectsNonPrime(q))?;
        let base_rule = if e == 1 {
            Vec::new()
        } else {
            let prime = Field::prime(p)?;
            let total = p.pow(e);
            (0..total)
                .map(|k| {
                    // most significant coefficient first
                    let mut r = vec![0u32; e as usize];
                    let mut v = k;
                    for i in 0..e as usize {
                        r[i] = v % p;
                        v /= p;
                    }
                    r
                })
                .find(|r| {
                    let rule: Vec<Elem> = r.iter().map(|&c| Elem(c)).collect();
                    Field::extension(&prime, &rule, "base").is_ok()
                })
                .ok_or(FieldError::RejectsReducible("base polynomial"))?
        };
        let base = Self::base_field(p, e, &base_rule)?;
        let quad = (0..q * q)
            .map(|k| [k % q, k / q])
            .find(|c| Field::extension(&base, &[Elem(c[0]), Elem(c[1])], "quad").is_ok())
            .ok_or(FieldError::RejectsReducible("quadratic polynomial"))?;
        let cubic = (0..q * q * q)
            .map(|k| [k % q, (k / q) % q, k / (q * q)])
            .filter(|c| {
                Field::extension(&base, &[Elem(c[0]), Elem(c[1]), Elem(c[2])], "cubic")
                    .map(|f| f.mult_order(Elem(q)) == (q as u64).pow(3) - 1)
                    .unwrap_or(false)
            })
            .nth(index)
            .ok_or(FieldError::RejectsImprimitive)?;
        Ok(FieldSpec { p, e, base_rule, cubic, quad })
    }

    /// Parse `q=<q>;cubic=<t0>,<t1>,<t2>;quad=<c0>,<c1>[;base=<r0>,...]`.
    ///
    /// `q` may be written as an integer or as `p^e`. Coefficients are base-p
    /// digit strings of field elements (most significant digit first).
    /// Omitted `quad` or `base` parts take their default values.
    pub fn parse(text: &str) -> Result<FieldSpec, FieldError> {
        let mut q = None;
        let mut cubic = None;
        let mut quad = None;
        let mut base = None;
        for part in text.trim().split(';').filter(|s| !s.trim().is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| FieldError::Parse(alloc::format!("missing '=' in {:?}", part)))?;
            match key.trim() {
                "q" => {
                    let v = val.trim();
                    let parsed = if let Some((b, e)) = v.split_once('^') {
                        let b: u32 = b.trim().parse().map_err(|_| FieldError::Parse(alloc::format!("bad q {:?}", v)))?;
                        let e: u32 = e.trim().parse().map_err(|_| FieldError::Parse(alloc::format!("bad q {:?}", v)))?;
                        b.checked_pow(e).ok_or_else(|| FieldError::Parse(alloc::format!("q {:?} too large", v)))?
                    } else {
                        v.parse().map_err(|_| FieldError::Parse(alloc::format!("bad q {:?}", v)))?
                    };
                    q = Some(parsed);
                }
                "cubic" => cubic = Some(val.trim()),
                "quad" => quad = Some(val.trim()),
                "base" => base = Some(val.trim()),
                other => return Err(FieldError::Parse(alloc::format!("unknown key {:?}", other))),
            }
        }
        let q = q.ok_or_else(|| FieldError::Parse(String::from("missing q")))?;
        let (p, e) = prime_power(q).ok_or(FieldError::RejectsNonPrime(q))?;
        let mut spec = Self::default_for(q)?;
        let prime = Field::prime(p)?;
        if let Some(b) = base {
            let coeffs = split_coeffs(&prime, b)?;
            if coeffs.len() != e as usize {
                return Err(FieldError::Parse(alloc::format!("base needs {} coefficients", e)));
            }
            spec.base_rule = coeffs;
        }
        let base_field = Self::base_field(p, e, &spec.base_rule)?;
        if let Some(c) = cubic {
            let coeffs = split_coeffs(&base_field, c)?;
            spec.cubic = coeffs
                .try_into()
                .map_err(|_| FieldError::Parse(String::from("cubic needs 3 coefficients")))?;
        }
        if let Some(c) = quad {
            let coeffs = split_coeffs(&base_field, c)?;
            spec.quad = coeffs
                .try_into()
                .map_err(|_| FieldError::Parse(String::from("quad needs 2 coefficients")))?;
        }
        Ok(spec)
    }

    /// Text form accepted by [`FieldSpec::parse`].
    pub fn to_text(&self) -> Result<String, FieldError> {
        let prime = Field::prime(self.p)?;
        let base = Self::base_field(self.p, self.e, &self.base_rule)?;
        let join = |f: &Field, cs: &[u32]| -> String {
            let parts: Vec<String> = cs.iter().map(|&c| f.to_digits(Elem(c))).collect();
            parts.join(",")
        };
        let mut out = alloc::format!(
            "q={};cubic={};quad={}",
            self.q(),
            join(&base, &self.cubic),
            join(&base, &self.quad)
        );
        if self.e > 1 {
            out.push_str(";base=");
            out.push_str(&join(&prime, &self.base_rule));
        }
        Ok(out)
    }
}

fn split_coeffs(f: &Field, s: &str) -> Result<Vec<u32>, FieldError> {
    s.split(',').map(|c| f.parse_digits(c.trim()).map(|e| e.0)).collect()
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text() {
            Ok(t) => f.write_str(&t),
            Err(_) => write!(f, "q={};cubic=?", self.q()),
        }
    }
}

/// Which level of the tower an element or object lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Base,
    Quad,
    Cubic,
}

/// GF(q) with its quadratic and cubic extensions and the primitive element
/// τ of GF(q^3).
#[derive(Clone, Debug)]
pub struct FieldTower {
    spec: FieldSpec,
    q: u32,
    prime: Field,
    base: Field,
    quad: Field,
    cubic: Field,
    tau: Elem,
}

impl FieldTower {
    pub fn new(spec: FieldSpec) -> Result<FieldTower, FieldError> {
        let prime = Field::prime(spec.p)?;
        let base = FieldSpec::base_field(spec.p, spec.e, &spec.base_rule)?;
        let q = base.order();
        if spec.cubic.iter().chain(spec.quad.iter()).any(|&c| c >= q) {
            return Err(FieldError::WrongLevel);
        }
        let cubic_rule = [Elem(spec.cubic[0]), Elem(spec.cubic[1]), Elem(spec.cubic[2])];
        let cubic = Field::extension(&base, &cubic_rule, "cubic polynomial")?;
        let tau = Elem(q);
        if cubic.mult_order(tau) != cubic.order() as u64 - 1 {
            return Err(FieldError::RejectsImprimitive);
        }
        let quad = Field::extension(&base, &[Elem(spec.quad[0]), Elem(spec.quad[1])], "quadratic polynomial")?;
        Ok(FieldTower { spec, q, prime, base, quad, cubic, tau })
    }

    /// Tower for `q` from the default spec.
    pub fn for_q(q: u32) -> Result<FieldTower, FieldError> {
        Self::new(FieldSpec::default_for(q)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn prime_field(&self) -> &Field {
        &self.prime
    }

    #[inline]
    pub fn base(&self) -> &Field {
        &self.base
    }

    #[inline]
    pub fn cubic(&self) -> &Field {
        &self.cubic
    }

    #[inline]
    pub fn quad(&self) -> &Field {
        &self.quad
    }

    pub fn field(&self, level: Level) -> &Field {
        match level {
            Level::Base => &self.base,
            Level::Quad => &self.quad,
            Level::Cubic => &self.cubic,
        }
    }

    #[inline]
    pub fn tau(&self) -> Elem {
        self.tau
    }

    /// `(t0, t1, t2)` as GF(q) elements.
    pub fn t(&self) -> [Elem; 3] {
        [Elem(self.spec.cubic[0]), Elem(self.spec.cubic[1]), Elem(self.spec.cubic[2])]
    }

    /// `x ↦ x^q` on GF(q^3).
    #[inline]
    pub fn frobenius(&self, x: Elem) -> Elem {
        self.cubic.frobenius(x)
    }

    /// `x ↦ x^(q^k)` on GF(q^3).
    pub fn frobenius_pow(&self, x: Elem, k: u32) -> Elem {
        (0..k % 3).fold(x, |acc, _| self.cubic.frobenius(acc))
    }

    /// `x^(q^2+q+1)`, an element of GF(q).
    pub fn norm(&self, x: Elem) -> Elem {
        let a = self.frobenius(x);
        let b = self.frobenius(a);
        self.cubic.mul(self.cubic.mul(x, a), b)
    }

    /// `x + x^q + x^(q^2)`, an element of GF(q).
    pub fn trace(&self, x: Elem) -> Elem {
        let a = self.frobenius(x);
        let b = self.frobenius(a);
        self.cubic.add(self.cubic.add(x, a), b)
    }

    /// `[x] = (a0, a1, a2)` with `x = a0 + a1 τ + a2 τ^2`.
    pub fn coords(&self, x: Elem) -> Result<[Elem; 3], FieldError> {
        if !self.cubic.contains(x) {
            return Err(FieldError::WrongLevel);
        }
        let q = self.q;
        Ok([Elem(x.0 % q), Elem((x.0 / q) % q), Elem(x.0 / (q * q))])
    }

    /// Unchecked version of [`FieldTower::coords`] for hot loops.
    #[inline]
    pub fn coords_of(&self, x: Elem) -> [Elem; 3] {
        let q = self.q;
        [Elem(x.0 % q), Elem((x.0 / q) % q), Elem(x.0 / (q * q))]
    }

    pub fn uncoords(&self, a: [Elem; 3]) -> Result<Elem, FieldError> {
        if a.iter().any(|c| !self.base.contains(*c)) {
            return Err(FieldError::WrongLevel);
        }
        let q = self.q;
        Ok(Elem(a[0].0 + q * a[1].0 + q * q * a[2].0))
    }

    #[inline]
    pub fn is_base(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// `x ↦ x^q` on GF(q^2).
    #[inline]
    pub fn quad_conj(&self, x: Elem) -> Elem {
        self.quad.frobenius(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(q: u32) -> FieldTower {
        FieldTower::for_q(q).unwrap()
    }

    #[test]
    fn default_q2_is_x3_x_1() {
        let s = FieldSpec::default_for(2).unwrap();
        assert_eq!(s.cubic, [1, 1, 0]);
        assert_eq!(s.to_text().unwrap(), "q=2;cubic=1,1,0;quad=1,1");
    }

    #[test]
    fn reducible_cubic_rejected() {
        // x^3 - x over GF(3): rule x^3 = x
        let spec = FieldSpec { p: 3, e: 1, base_rule: Vec::new(), cubic: [0, 1, 0], quad: [2, 0] };
        assert_eq!(FieldTower::new(spec).unwrap_err(), FieldError::RejectsReducible("cubic polynomial"));
    }

    #[test]
    fn imprimitive_cubic_rejected() {
        // x^3 + x^2 + x + 1 is reducible over GF(2); x^3 = 2 over GF(7) has no
        // root but cube roots of 2 have order dividing 3(7-1) < 342.
        let spec = FieldSpec { p: 7, e: 1, base_rule: Vec::new(), cubic: [2, 0, 0], quad: [3, 0] };
        assert_eq!(FieldTower::new(spec).unwrap_err(), FieldError::RejectsImprimitive);
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(FieldSpec::default_for(6).unwrap_err(), FieldError::RejectsNonPrime(6));
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn tau_orders() {
        for q in [2u32, 3, 4, 5] {
            let tw = t(q);
            let n = q.pow(3) as u64 - 1;
            // independent order computation by repeated multiplication
            let cf = tw.cubic();
            let mut x = tw.tau();
            let mut k = 1u64;
            while x != Elem::ONE {
                x = cf.mul(x, tw.tau());
                k += 1;
            }
            assert_eq!(k, n);
        }
    }

    #[test]
    fn cubic_relation_holds() {
        for q in [2u32, 3, 4, 5] {
            let tw = t(q);
            let cf = tw.cubic();
            let [t0, t1, t2] = tw.t();
            let tau = tw.tau();
            let lhs = cf.pow(tau, 3);
            let rhs = cf.sum([t0, cf.mul(t1, tau), cf.mul(t2, cf.mul(tau, tau))]);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn norm_is_one_on_gf8() {
        let tw = t(2);
        for x in tw.cubic().nonzero() {
            assert_eq!(tw.norm(x), Elem::ONE);
        }
    }

    #[test]
    fn coords_examples() {
        let tw = t(3);
        let cf = tw.cubic();
        assert_eq!(tw.coords(cf.mul(tw.tau(), tw.tau())).unwrap(), [Elem(0), Elem(0), Elem(1)]);
        assert_eq!(tw.norm(Elem::ONE), Elem::ONE);
        assert_eq!(tw.coords(Elem(27)), Err(FieldError::WrongLevel));
        for a in tw.base().elements() {
            assert_eq!(tw.frobenius(a), a);
        }
    }

    #[test]
    fn spec_text_roundtrip() {
        for q in [2u32, 3, 4, 5, 8, 9] {
            let s = FieldSpec::default_for(q).unwrap();
            let txt = s.to_text().unwrap();
            assert_eq!(FieldSpec::parse(&txt).unwrap(), s);
        }
        let s = FieldSpec::parse("q=2^2;cubic=01,00,10").unwrap();
        assert_eq!(s.q(), 4);
        assert_eq!(s.cubic, [1, 0, 2]);
    }

    #[test]
    fn alternative_specs_exist() {
        for q in [2u32, 3, 4, 5] {
            let a = FieldSpec::admissible(q, 0).unwrap();
            let b = FieldSpec::admissible(q, 1).unwrap();
            assert_ne!(a.cubic, b.cubic);
            FieldTower::new(b).unwrap();
        }
    }

    #[test]
    fn q_minus_one_powers() {
        for q in [2u32, 3, 4, 5] {
            let tw = t(q);
            let cf = tw.cubic();
            let m = (q * q + q + 1) as u64;
            let mut img: Vec<Elem> = cf.nonzero().map(|x| cf.pow(x, q as u64 - 1)).collect();
            img.sort();
            img.dedup();
            let kernel: Vec<Elem> = cf.nonzero().filter(|&k| cf.pow(k, m) == Elem::ONE).collect();
            assert_eq!(img, kernel);
            assert_eq!(img.len() as u64, m);
        }
    }
}
