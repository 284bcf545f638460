//! Double-double arithmetic: an unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
//! Used as the compensated accumulator for every partial sum.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// 1/d for an integer-valued d (|d| < 2^53), correct to about 1e-32.
    pub fn recip_int(d: f64) -> Dd {
        let hi = 1.0 / d;
        let lo = (-hi).mul_add(d, 1.0) / d;
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::new(b).mul_f64(q1);
        let q2 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn floor(self) -> Dd {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Dd { hi, lo }
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    /// Decimal digits of a positive value, rounded to `sig` significant digits.
    /// Returns the digit string and the decimal exponent of its first digit.
    pub fn sig_digits(self, sig: usize) -> (Vec<u8>, i32) {
        assert!(self.hi > 0.0 && sig >= 1);
        let mut e = self.hi.log10().floor() as i32;
        let mut m = scale_pow10(self, -e);
        if m.hi >= 10.0 {
            m = m.div_f64(10.0);
            e += 1;
        } else if m.hi < 1.0 {
            m = m.mul_f64(10.0);
            e -= 1;
        }
        let mut digits = Vec::with_capacity(sig + 1);
        for _ in 0..=sig {
            let d = m.floor().to_f64().clamp(0.0, 9.0);
            digits.push(d as u8);
            m = (m - Dd::new(d)).mul_f64(10.0);
        }
        let round_up = digits[sig] >= 5;
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    e += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
        (digits, e)
    }

    /// Fixed-point rendering with `decimals` digits after the point (rounded).
    pub fn to_fixed(self, decimals: usize) -> String {
        if self.hi == 0.0 {
            return format!("{:.*}", decimals, 0.0);
        }
        let neg = self.hi < 0.0;
        let v = self.abs();
        let e = v.hi.log10().floor() as i32;
        let sig = e + 1 + decimals as i32;
        if sig <= 0 {
            let half = 0.5 * 10f64.powi(-(decimals as i32));
            let unit = if v.hi >= half && sig == 0 { Dd::new(10f64.powi(-(decimals as i32))) } else { Dd::ZERO };
            return if unit.hi == 0.0 {
                format!("{:.*}", decimals, 0.0)
            } else {
                format!("{}{}", if neg { "-" } else { "" }, unit.to_fixed(decimals))
            };
        }
        let (digits, e) = v.sig_digits(sig as usize);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        let int_len = e + 1;
        let digit_at = |pos: i32| -> char {
            // pos = power of ten
            let idx = e - pos;
            if idx >= 0 && (idx as usize) < digits.len() {
                (b'0' + digits[idx as usize]) as char
            } else {
                '0'
            }
        };
        if int_len <= 0 {
            s.push('0');
        } else {
            for pos in (0..int_len).rev() {
                s.push(digit_at(pos));
            }
        }
        if decimals > 0 {
            s.push('.');
            for k in 1..=decimals as i32 {
                s.push(digit_at(-k));
            }
        }
        s
    }
}

fn scale_pow10(x: Dd, p: i32) -> Dd {
    let mut r = x;
    let mut k = p;
    while k > 0 {
        let step = k.min(22);
        r = r.mul_f64(10f64.powi(step));
        k -= step;
    }
    while k < 0 {
        let step = (-k).min(22);
        r = r.div_f64(10f64.powi(step));
        k += step;
    }
    r
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}
