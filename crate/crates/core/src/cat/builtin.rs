//! Parametric built-in categories with closed-form composition.
//!
//! * `BZ`: one object, morphisms the integers under addition.
//! * `BRdelta`: one object, morphisms the (rational points of the) reals
//!   under addition.
//! * `Loc1Skeletal`: open intervals `(a,b)` with `-inf <= a < b <= +inf`;
//!   a morphism `f[ξ]: (a,b) -> (a',b')` is the translation `t ↦ t + ξ` and
//!   exists iff `a' <= a + ξ` and `b + ξ <= b'`.
//! * `DiskBoxes`: open axis-parallel boxes in `Q^m` with inclusions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Mor, Obj};
use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, q, qf, random_nonneg_q, random_q, Ext, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Ext,
    pub hi: Ext,
}

impl Interval {
    pub fn new(lo: Ext, hi: Ext) -> Result<Self> {
        if lo >= hi || lo == Ext::PosInf || hi == Ext::NegInf {
            return Err(Error::Parse(format!("empty interval ({lo},{hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn finite(a: Q, b: Q) -> Result<Self> {
        Interval::new(Ext::Fin(a), Ext::Fin(b))
    }

    pub fn real_line() -> Self {
        Interval { lo: Ext::NegInf, hi: Ext::PosInf }
    }

    pub fn is_real_line(&self) -> bool {
        self.lo == Ext::NegInf && self.hi == Ext::PosInf
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("interval `{s}` must look like (a,b)")))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| Error::Parse(format!("interval `{s}` needs a comma")))?;
        Interval::new(Ext::parse(a)?, Ext::parse(b)?)
    }

    /// Range of admissible translation amounts into `tgt`, as extended bounds;
    /// `None` when no translation maps `self` into `tgt`.
    pub fn shift_range(&self, tgt: &Interval) -> Option<(Ext, Ext)> {
        // a' <= a + ξ
        let lower = match (&tgt.lo, &self.lo) {
            (Ext::NegInf, _) => Ext::NegInf,
            (Ext::Fin(_), Ext::NegInf) => return None,
            (Ext::Fin(a2), Ext::Fin(a)) => Ext::Fin(a2 - a),
            _ => return None,
        };
        // b + ξ <= b'
        let upper = match (&tgt.hi, &self.hi) {
            (Ext::PosInf, _) => Ext::PosInf,
            (Ext::Fin(_), Ext::PosInf) => return None,
            (Ext::Fin(b2), Ext::Fin(b)) => Ext::Fin(b2 - b),
            _ => return None,
        };
        (lower <= upper).then_some((lower, upper))
    }

    pub fn admits_shift(&self, tgt: &Interval, xi: &Q) -> bool {
        match self.shift_range(tgt) {
            None => false,
            Some((lo, hi)) => lo <= Ext::Fin(xi.clone()) && Ext::Fin(xi.clone()) <= hi,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// An open box `∏ (a_i, b_i)` with finite rational sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxRegion {
    pub sides: Vec<(Q, Q)>,
}

impl BoxRegion {
    pub fn new(sides: Vec<(Q, Q)>) -> Result<Self> {
        if sides.is_empty() || sides.iter().any(|(a, b)| a >= b) {
            return Err(Error::Parse("box sides must be nonempty open intervals".into()));
        }
        Ok(BoxRegion { sides })
    }

    pub fn cube(dim: usize, lo: Q, hi: Q) -> Result<Self> {
        BoxRegion::new(vec![(lo, hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn contains(&self, inner: &BoxRegion) -> bool {
        self.dim() == inner.dim() && self.sides.iter().zip(&inner.sides).all(|((a, b), (c, d))| a <= c && d <= b)
    }

    pub fn disjoint(&self, other: &BoxRegion) -> bool {
        self.sides.iter().zip(&other.sides).any(|((a, b), (c, d))| b <= c || d <= a)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let sides = s
            .split('x')
            .map(|part| {
                let iv = Interval::parse(part)?;
                match (iv.lo, iv.hi) {
                    (Ext::Fin(a), Ext::Fin(b)) => Ok((a, b)),
                    _ => Err(Error::Parse(format!("box side `{part}` must be finite"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        BoxRegion::new(sides)
    }
}

impl fmt::Display for BoxRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sides.iter().map(|(a, b)| format!("({},{})", format_q(a), format_q(b))).collect();
        write!(f, "{}", parts.join("x"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Builtin {
    BZ,
    BRdelta,
    Loc1Skeletal,
    DiskBoxes { dim: usize },
}

impl Builtin {
    pub fn from_name(name: &str, dim: Option<usize>) -> Result<Self> {
        match name {
            "BZ" => Ok(Builtin::BZ),
            "BRdelta" => Ok(Builtin::BRdelta),
            "Loc1Skeletal" => Ok(Builtin::Loc1Skeletal),
            "DiskBoxes" => Ok(Builtin::DiskBoxes { dim: dim.unwrap_or(2).max(1) }),
            other => Err(Error::Parse(format!("unknown built-in category `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::BZ => "BZ",
            Builtin::BRdelta => "BRdelta",
            Builtin::Loc1Skeletal => "Loc1Skeletal",
            Builtin::DiskBoxes { .. } => "DiskBoxes",
        }
    }

    pub(super) fn check_obj(&self, x: &Obj) -> Result<()> {
        let ok = match (self, x) {
            (Builtin::BZ | Builtin::BRdelta, Obj::Star) => true,
            (Builtin::Loc1Skeletal, Obj::Interval(_)) => true,
            (Builtin::DiskBoxes { dim }, Obj::Region(b)) => b.dim() == *dim,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownObject(format!("{x:?} in {}", self.name())))
        }
    }

    pub(super) fn check_mor(&self, f: &Mor) -> Result<()> {
        let ok = match (self, f) {
            (Builtin::BZ, Mor::Int(_)) | (Builtin::BRdelta, Mor::Real(_)) => true,
            (Builtin::Loc1Skeletal, Mor::Translate { src, tgt, shift }) => src.admits_shift(tgt, shift),
            (Builtin::DiskBoxes { dim }, Mor::Incl { src, tgt }) => src.dim() == *dim && tgt.contains(src),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnknownMorphism(format!("{f:?} in {}", self.name())))
        }
    }

    pub(super) fn source(&self, f: &Mor) -> Result<Obj> {
        self.check_mor(f)?;
        Ok(match f {
            Mor::Translate { src, .. } => Obj::Interval(src.clone()),
            Mor::Incl { src, .. } => Obj::Region(src.clone()),
            _ => Obj::Star,
        })
    }

    pub(super) fn target(&self, f: &Mor) -> Result<Obj> {
        self.check_mor(f)?;
        Ok(match f {
            Mor::Translate { tgt, .. } => Obj::Interval(tgt.clone()),
            Mor::Incl { tgt, .. } => Obj::Region(tgt.clone()),
            _ => Obj::Star,
        })
    }

    pub(super) fn identity(&self, x: &Obj) -> Result<Mor> {
        self.check_obj(x)?;
        Ok(match (self, x) {
            (Builtin::BZ, _) => Mor::Int(BigInt::zero()),
            (Builtin::BRdelta, _) => Mor::Real(Q::zero()),
            (Builtin::Loc1Skeletal, Obj::Interval(i)) => Mor::Translate { src: i.clone(), tgt: i.clone(), shift: Q::zero() },
            (Builtin::DiskBoxes { .. }, Obj::Region(b)) => Mor::Incl { src: b.clone(), tgt: b.clone() },
            _ => unreachable!("object checked above"),
        })
    }

    pub(super) fn compose(&self, g: &Mor, f: &Mor) -> Result<Mor> {
        self.check_mor(g)?;
        self.check_mor(f)?;
        match (g, f) {
            (Mor::Int(a), Mor::Int(b)) => Ok(Mor::Int(a + b)),
            (Mor::Real(a), Mor::Real(b)) => Ok(Mor::Real(a + b)),
            (Mor::Translate { src: gs, tgt: gt, shift: gx }, Mor::Translate { src: fs, tgt: ft, shift: fx }) => {
                if ft != gs {
                    return Err(Error::NonComposable(format!("f[{}]:{fs}->{ft} then f[{}]:{gs}->{gt}", format_q(fx), format_q(gx))));
                }
                Ok(Mor::Translate { src: fs.clone(), tgt: gt.clone(), shift: fx + gx })
            }
            (Mor::Incl { src: gs, tgt: gt }, Mor::Incl { src: fs, tgt: ft }) => {
                if ft != gs {
                    return Err(Error::NonComposable(format!("{fs}->{ft} then {gs}->{gt}")));
                }
                Ok(Mor::Incl { src: fs.clone(), tgt: gt.clone() })
            }
            _ => Err(Error::NonComposable(format!("{g:?} ∘ {f:?}"))),
        }
    }

    /// Closed-form inverse predicate.
    pub(super) fn inverse(&self, f: &Mor) -> Result<Option<Mor>> {
        self.check_mor(f)?;
        Ok(match f {
            Mor::Int(n) => Some(Mor::Int(-n)),
            Mor::Real(x) => Some(Mor::Real(-x)),
            Mor::Translate { src, tgt, shift } => {
                let onto = &src.lo + shift == tgt.lo && &src.hi + shift == tgt.hi;
                onto.then(|| Mor::Translate { src: tgt.clone(), tgt: src.clone(), shift: -shift })
            }
            Mor::Incl { src, tgt } => (src == tgt).then(|| f.clone()),
            Mor::Idx(_) => None,
        })
    }

    pub(super) fn obj_label(&self, x: &Obj) -> String {
        match x {
            Obj::Star => "*".to_string(),
            Obj::Interval(i) => i.to_string(),
            Obj::Region(b) => b.to_string(),
            Obj::Idx(i) => format!("#{i}"),
        }
    }

    pub(super) fn mor_label(&self, f: &Mor) -> String {
        match f {
            Mor::Int(n) => n.to_string(),
            Mor::Real(x) => format_q(x),
            Mor::Translate { src, tgt, shift } => format!("f[{}]:{src}->{tgt}", format_q(shift)),
            Mor::Incl { src, tgt } => format!("{src}->{tgt}"),
            Mor::Idx(i) => format!("#{i}"),
        }
    }

    pub(super) fn parse_obj(&self, s: &str) -> Result<Obj> {
        let x = match self {
            Builtin::BZ | Builtin::BRdelta => {
                if s.trim() == "*" {
                    Obj::Star
                } else {
                    return Err(Error::UnknownObject(s.to_string()));
                }
            }
            Builtin::Loc1Skeletal => Obj::Interval(Interval::parse(s)?),
            Builtin::DiskBoxes { .. } => Obj::Region(BoxRegion::parse(s)?),
        };
        self.check_obj(&x)?;
        Ok(x)
    }

    pub(super) fn parse_mor(&self, s: &str) -> Result<Mor> {
        let s = s.trim();
        let f = match self {
            Builtin::BZ => Mor::Int(s.parse().map_err(|_| Error::UnknownMorphism(s.to_string()))?),
            Builtin::BRdelta => Mor::Real(parse_q(s)?),
            Builtin::Loc1Skeletal => {
                let rest = s.strip_prefix("f[").ok_or_else(|| Error::UnknownMorphism(s.to_string()))?;
                let (xi, rest) = rest.split_once("]:").ok_or_else(|| Error::UnknownMorphism(s.to_string()))?;
                let (a, b) = rest.split_once("->").ok_or_else(|| Error::UnknownMorphism(s.to_string()))?;
                Mor::Translate { src: Interval::parse(a)?, tgt: Interval::parse(b)?, shift: parse_q(xi)? }
            }
            Builtin::DiskBoxes { .. } => {
                let (a, b) = s.split_once("->").ok_or_else(|| Error::UnknownMorphism(s.to_string()))?;
                Mor::Incl { src: BoxRegion::parse(a)?, tgt: BoxRegion::parse(b)? }
            }
        };
        self.check_mor(&f)?;
        Ok(f)
    }

    // ---- sampling -------------------------------------------------------

    pub(super) fn sample_object<R: Rng + ?Sized>(&self, rng: &mut R) -> Obj {
        match self {
            Builtin::BZ | Builtin::BRdelta => Obj::Star,
            Builtin::Loc1Skeletal => Obj::Interval(sample_interval(rng)),
            Builtin::DiskBoxes { dim } => Obj::Region(sample_box(rng, *dim)),
        }
    }

    pub(super) fn sample_morphism_from<R: Rng + ?Sized>(&self, rng: &mut R, x: &Obj) -> Mor {
        match (self, x) {
            (Builtin::BZ, _) => Mor::Int(BigInt::from(rng.gen_range(-12i64..=12))),
            (Builtin::BRdelta, _) => Mor::Real(random_q(rng, 12)),
            (Builtin::Loc1Skeletal, Obj::Interval(i)) => {
                let shift = if rng.gen_bool(0.2) { Q::zero() } else { random_q(rng, 6) };
                let lo = match &i.lo {
                    Ext::NegInf => Ext::NegInf,
                    Ext::Fin(_) if rng.gen_bool(0.2) => Ext::NegInf,
                    Ext::Fin(a) if rng.gen_bool(0.3) => Ext::Fin(a + &shift),
                    Ext::Fin(a) => Ext::Fin(a + &shift - random_nonneg_q(rng, 4)),
                    Ext::PosInf => unreachable!("interval lower end is never +inf"),
                };
                let hi = match &i.hi {
                    Ext::PosInf => Ext::PosInf,
                    Ext::Fin(_) if rng.gen_bool(0.2) => Ext::PosInf,
                    Ext::Fin(b) if rng.gen_bool(0.3) => Ext::Fin(b + &shift),
                    Ext::Fin(b) => Ext::Fin(b + &shift + random_nonneg_q(rng, 4)),
                    Ext::NegInf => unreachable!("interval upper end is never -inf"),
                };
                Mor::Translate { src: i.clone(), tgt: Interval { lo, hi }, shift }
            }
            (Builtin::DiskBoxes { .. }, Obj::Region(b)) => {
                let sides = b
                    .sides
                    .iter()
                    .map(|(a, c)| (a - random_nonneg_q(rng, 2), c + random_nonneg_q(rng, 2)))
                    .collect();
                Mor::Incl { src: b.clone(), tgt: BoxRegion { sides } }
            }
            _ => panic!("object {x:?} does not belong to {}", self.name()),
        }
    }

    pub(super) fn sample_morphism_into<R: Rng + ?Sized>(&self, rng: &mut R, y: &Obj) -> Mor {
        match (self, y) {
            (Builtin::BZ | Builtin::BRdelta, _) => self.sample_morphism_from(rng, y),
            (Builtin::Loc1Skeletal, Obj::Interval(t)) => {
                let shift = if rng.gen_bool(0.2) { Q::zero() } else { random_q(rng, 6) };
                // Source (a,b) must satisfy a' <= a + ξ and b + ξ <= b'.
                let mut attempt = 0;
                let src = loop {
                    attempt += 1;
                    let slack = |rng: &mut R| if attempt > 8 { Q::zero() } else { random_nonneg_q(rng, 2) };
                    let lo = match &t.lo {
                        Ext::NegInf if rng.gen_bool(0.4) => Ext::NegInf,
                        Ext::NegInf => Ext::Fin(random_q(rng, 6)),
                        Ext::Fin(a) => Ext::Fin(a - &shift + slack(rng)),
                        Ext::PosInf => unreachable!("interval lower end is never +inf"),
                    };
                    let hi = match &t.hi {
                        Ext::PosInf if rng.gen_bool(0.4) => Ext::PosInf,
                        Ext::PosInf => Ext::Fin(random_q(rng, 6) + q(7)),
                        Ext::Fin(b) => Ext::Fin(b - &shift - slack(rng)),
                        Ext::NegInf => unreachable!("interval upper end is never -inf"),
                    };
                    if lo < hi {
                        break Interval { lo, hi };
                    }
                };
                Mor::Translate { src, tgt: t.clone(), shift }
            }
            (Builtin::DiskBoxes { .. }, Obj::Region(b)) => {
                let sides = b
                    .sides
                    .iter()
                    .map(|(a, c)| {
                        let w = c - a;
                        let l = a + &w * qf(rng.gen_range(0..=2), 8);
                        let r = c - &w * qf(rng.gen_range(0..=2), 8);
                        (l, r)
                    })
                    .collect();
                Mor::Incl { src: BoxRegion { sides }, tgt: b.clone() }
            }
            _ => panic!("object {y:?} does not belong to {}", self.name()),
        }
    }

    pub(super) fn sample_hom<R: Rng + ?Sized>(&self, rng: &mut R, x: &Obj, y: &Obj) -> Option<Mor> {
        match (self, x, y) {
            (Builtin::BZ | Builtin::BRdelta, _, _) => Some(self.sample_morphism_from(rng, x)),
            (Builtin::Loc1Skeletal, Obj::Interval(a), Obj::Interval(b)) => {
                let (lo, hi) = a.shift_range(b)?;
                let shift = match (lo, hi) {
                    (Ext::Fin(l), Ext::Fin(h)) => {
                        let t = qf(rng.gen_range(0..=4), 4);
                        &l + (h - &l) * t
                    }
                    (Ext::Fin(l), _) => l + random_nonneg_q(rng, 6),
                    (_, Ext::Fin(h)) => h - random_nonneg_q(rng, 6),
                    _ => random_q(rng, 8),
                };
                Some(Mor::Translate { src: a.clone(), tgt: b.clone(), shift })
            }
            (Builtin::DiskBoxes { .. }, Obj::Region(a), Obj::Region(b)) => {
                b.contains(a).then(|| Mor::Incl { src: a.clone(), tgt: b.clone() })
            }
            _ => None,
        }
    }
}

fn sample_interval<R: Rng + ?Sized>(rng: &mut R) -> Interval {
    if rng.gen_bool(0.1) {
        return Interval::real_line();
    }
    let lo = if rng.gen_bool(0.15) { Ext::NegInf } else { Ext::Fin(random_q(rng, 6)) };
    let hi = match &lo {
        _ if rng.gen_bool(0.15) => Ext::PosInf,
        Ext::Fin(a) => Ext::Fin(a + random_nonneg_q(rng, 6) + qf(1, 4)),
        _ => Ext::Fin(random_q(rng, 6)),
    };
    Interval { lo, hi }
}

fn sample_box<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> BoxRegion {
    let sides = (0..dim)
        .map(|_| {
            let a = qf(rng.gen_range(0..=12), 2);
            let w = qf(rng.gen_range(1..=8), 2);
            let b = &a + w;
            (a, b)
        })
        .collect();
    BoxRegion { sides }
}

/// Checked constructor for a translation morphism of `Loc1Skeletal`.
pub fn translate(src: Interval, tgt: Interval, shift: Q) -> Result<Mor> {
    let f = Mor::Translate { src, tgt, shift };
    Builtin::Loc1Skeletal.check_mor(&f)?;
    Ok(f)
}

pub fn int(n: i64) -> Mor {
    Mor::Int(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::finite(q(a), q(b)).unwrap()
    }

    #[test]
    fn translation_constraint() {
        assert!(iv(0, 1).admits_shift(&iv(0, 2), &qf(1, 2)));
        assert!(!iv(0, 2).admits_shift(&iv(0, 1), &q(0)));
        assert!(iv(0, 2).shift_range(&iv(0, 1)).is_none());
        let line = Interval::real_line();
        assert!(iv(0, 1).admits_shift(&line, &q(100)));
        assert!(line.shift_range(&iv(0, 1)).is_none());
        assert!(line.admits_shift(&line, &q(-3)));
    }

    #[test]
    fn loc1_inverse_only_for_onto_translations() {
        let b = Builtin::Loc1Skeletal;
        let f = translate(iv(0, 1), iv(2, 3), q(2)).unwrap();
        assert_eq!(b.inverse(&f).unwrap(), Some(translate(iv(2, 3), iv(0, 1), q(-2)).unwrap()));
        let g = translate(iv(0, 1), iv(0, 2), qf(1, 2)).unwrap();
        assert_eq!(b.inverse(&g).unwrap(), None);
        let h = translate(Interval::real_line(), Interval::real_line(), q(5)).unwrap();
        assert!(b.inverse(&h).unwrap().is_some());
    }

    #[test]
    fn samplers_produce_valid_morphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for b in [Builtin::BZ, Builtin::BRdelta, Builtin::Loc1Skeletal, Builtin::DiskBoxes { dim: 2 }] {
            for _ in 0..200 {
                let x = b.sample_object(&mut rng);
                let f = b.sample_morphism_from(&mut rng, &x);
                b.check_mor(&f).unwrap();
                assert_eq!(b.source(&f).unwrap(), x);
                let g = b.sample_morphism_into(&mut rng, &x);
                b.check_mor(&g).unwrap();
                assert_eq!(b.target(&g).unwrap(), x);
                let y = b.target(&f).unwrap();
                if let Some(h) = b.sample_hom(&mut rng, &x, &y) {
                    b.check_mor(&h).unwrap();
                }
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        let b = Builtin::Loc1Skeletal;
        let f = translate(iv(0, 1), Interval { lo: Ext::NegInf, hi: Ext::Fin(q(4)) }, qf(3, 2)).unwrap();
        let label = b.mor_label(&f);
        assert_eq!(label, "f[3/2]:(0,1)->(-inf,4)");
        assert_eq!(b.parse_mor(&label).unwrap(), f);
        let d = Builtin::DiskBoxes { dim: 2 };
        let bx = BoxRegion::new(vec![(q(0), q(1)), (qf(1, 2), q(2))]).unwrap();
        assert_eq!(d.parse_obj(&d.obj_label(&Obj::Region(bx.clone()))).unwrap(), Obj::Region(bx));
    }
}
