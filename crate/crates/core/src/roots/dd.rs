//! Just enough double-double arithmetic for a compensated Horner evaluation.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// `p(z)` for descending `coeffs`, accumulated in double-double.
pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut re = Dd::default();
    let mut im = Dd::default();
    for c in coeffs {
        let new_re = re
            .mul_f64(z.re)
            .add(im.mul_f64(z.im).neg())
            .add(Dd::from(c.re));
        let new_im = re.mul_f64(z.im).add(im.mul_f64(z.re)).add(Dd::from(c.im));
        re = new_re;
        im = new_im;
    }
    Complex64::new(re.hi + re.lo, im.hi + im.lo)
}
