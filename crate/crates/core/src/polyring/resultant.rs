use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::IntScalar;

/// `prem(a, b)`: the remainder of `lc(b)^(deg a - deg b + 1) * a` by `b`.
pub fn pseudo_remainder<T: IntScalar>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    let db = b.degree().expect("pseudo-division by zero polynomial");
    let lb = b.leading().unwrap().clone();
    let Some(da) = a.degree() else {
        return Poly::zero();
    };
    if da < db {
        return a.clone();
    }
    let mut r = a.clone();
    let mut e = da - db + 1;
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let s = Poly::monomial(r.leading().unwrap().clone(), dr - db);
        r = r.scale(&lb).sub(&s.mul(b));
        e -= 1;
    }
    r.scale(&lb.pow_u32(e as u32))
}

/// Resultant via the subresultant pseudo-remainder sequence.
pub fn resultant<T: IntScalar>(a: &Poly<T>, b: &Poly<T>) -> T {
    if a.is_zero() || b.is_zero() {
        return T::zero();
    }
    let ca = a.content();
    let cb = b.content();
    let mut a = a.div_exact_scalar(&ca);
    let mut b = b.div_exact_scalar(&cb);
    let deg = |p: &Poly<T>| p.degree().unwrap() as u32;

    let t = ca.pow_u32(deg(&b)) * cb.pow_u32(deg(&a));
    let mut s = T::one();
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = -s;
        }
    }

    let mut g = T::one();
    let mut h = T::one();
    while deg(&b) > 0 {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s = -s;
        }
        let r = pseudo_remainder(&a, &b);
        if r.is_zero() {
            return T::zero();
        }
        a = b;
        b = r.div_exact_scalar(&(g.clone() * h.pow_u32(delta)));
        g = a.leading().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow_u32(delta) / h.pow_u32(delta - 1)
        };
    }
    // b is a nonzero constant here
    let da = deg(&a);
    let lb = b.leading().unwrap().clone();
    let h = if da == 0 {
        h
    } else {
        lb.pow_u32(da) / h.pow_u32(da - 1)
    };
    s * t * h
}

/// `disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f)`, for `deg f >= 2`.
pub fn discriminant<T: IntScalar>(f: &Poly<T>) -> Result<T> {
    let d = match f.degree() {
        Some(d) if d >= 2 => d,
        other => {
            return Err(Error::Domain(format!(
                "discriminant needs degree >= 2, got {other:?}"
            )))
        }
    };
    let res = resultant(f, &f.derivative());
    let lc = f.leading().unwrap().clone();
    let q = res / lc;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}
