//! Brute-force reference for the acceptance suite, independent of the
//! engine under test: its own dense polynomial arithmetic in q^{1/2}, the
//! tetrahedron index by direct summation, and the figure-eight index as a
//! plain double sum over a wide fixed window with no degree pruning and no
//! shell heuristics.

/// Dense polynomial in q^{1/2} over i128: coefficient of q^{h/2} at `h -
/// offset`, valid strictly below `order` (absolute half-exponent).
#[derive(Clone, Debug)]
pub struct Poly {
    pub offset: i128,
    pub coeffs: Vec<i128>,
    pub order: i128,
}

impl Poly {
    pub fn zero(order: i128) -> Poly {
        Poly { offset: 0, coeffs: vec![], order }
    }

    pub fn mono(c: i128, h: i128, order: i128) -> Poly {
        if h >= order || c == 0 {
            Poly::zero(order)
        } else {
            Poly { offset: h, coeffs: vec![c], order }
        }
    }

    pub fn coeff(&self, h: i128) -> i128 {
        let i = h - self.offset;
        if i < 0 || i as usize >= self.coeffs.len() {
            0
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let order = self.order.min(o.order);
        let lo = self.offset.min(o.offset);
        let hi = (self.offset + self.coeffs.len() as i128).max(o.offset + o.coeffs.len() as i128);
        let mut out = vec![0i128; (hi - lo).max(0) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[(self.offset - lo) as usize + i] += c;
        }
        for (i, &c) in o.coeffs.iter().enumerate() {
            out[(o.offset - lo) as usize + i] += c;
        }
        let mut p = Poly { offset: lo, coeffs: out, order };
        p.trim();
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        // both factors here always have full relative precision to `order`,
        // so the product is kept to the smaller order
        let order = self.order.min(o.order);
        let lo = self.offset + o.offset;
        let n = ((order - lo).max(0) as usize).min(self.coeffs.len() + o.coeffs.len());
        let mut out = vec![0i128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if i + j < n {
                    out[i + j] += a * b;
                }
            }
        }
        let mut p = Poly { offset: lo, coeffs: out, order };
        p.trim();
        p
    }

    fn trim(&mut self) {
        if let Some(o) = self.order.checked_sub(self.offset) {
            self.coeffs.truncate(o.max(0) as usize);
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        while self.coeffs.first() == Some(&0) {
            self.coeffs.remove(0);
            self.offset += 1;
        }
    }
}

/// 1 / (q;q)_n to absolute half-order `order` by direct series division.
fn inv_poch(n: i128, order: i128) -> Poly {
    // (q;q)_n truncated as it is built; factors with 2i >= order are 1
    // modulo the truncation
    let mut p = Poly::mono(1, 0, order.max(1));
    for i in 1..=n {
        if 2 * i >= order {
            break;
        }
        let factor = Poly {
            offset: 0,
            coeffs: {
                let mut v = vec![1i128];
                v.extend(std::iter::repeat_n(0, (2 * i - 1) as usize));
                v.push(-1);
                v
            },
            order: i128::MAX / 4,
        };
        p = p.mul(&factor);
    }
    // divide 1 by p with constant term 1
    let len = order.max(1) as usize;
    let mut a = vec![0i128; len];
    for (i, &c) in p.coeffs.iter().enumerate() {
        if i < len {
            a[i] = c;
        }
    }
    let mut b = vec![0i128; len];
    b[0] = 1;
    for k in 1..len {
        let mut acc = 0i128;
        for i in 1..=k {
            acc += a[i] * b[k - i];
        }
        b[k] = -acc;
    }
    let mut out = Poly { offset: 0, coeffs: b, order };
    out.trim();
    out
}

/// I(m,e) by direct summation of the defining sum over a fixed wide window
/// of n, with no early termination logic.
pub fn tet_index(m: i128, e: i128, order: i128) -> Poly {
    let mut total = Poly::zero(order);
    let n_hi = 2 * order.abs() + 2 * m.abs() + 2 * e.abs() + 8;
    let mut n = (-e).max(0);
    while n <= n_hi {
        let h = n * (n + 1) - (2 * n + e) * m;
        if h < order {
            let t = inv_poch(n, order - h).mul(&inv_poch(n + e, order - h));
            let shifted = Poly { offset: t.offset + h, coeffs: t.coeffs.clone(), order };
            let signed = if n % 2 == 0 {
                shifted
            } else {
                Poly {
                    offset: shifted.offset,
                    coeffs: shifted.coeffs.iter().map(|c| -c).collect(),
                    order,
                }
            };
            total = total.add(&signed);
        }
        n += 1;
    }
    total
}

/// J(a,b,c) = (-q^{1/2})^{-b} I(b-c, a-b).
pub fn j(a: i128, b: i128, c: i128, order: i128) -> Poly {
    let t = tet_index(b - c, a - b, order + b);
    let sign = if b.rem_euclid(2) == 1 { -1 } else { 1 };
    Poly {
        offset: t.offset - b,
        coeffs: t.coeffs.iter().map(|x| sign * x).collect(),
        order,
    }
}

fn omega6(x: &[i128; 6], y: &[i128; 6]) -> i128 {
    let mut acc = 0;
    for jt in 0..2 {
        let (a, b, c) = (x[3 * jt], x[3 * jt + 1], x[3 * jt + 2]);
        let (p, r, s) = (y[3 * jt], y[3 * jt + 1], y[3 * jt + 2]);
        acc += (a * r - b * p) + (b * s - c * r) + (c * p - a * s);
    }
    acc
}

/// Index of [Z^{S0}] for the 2-tetrahedron figure-eight datum with edge
/// row E0 = (2,1,0,2,1,0): a plain double sum over the window |k| <= k_hi
/// with the inner n-sums inside `tet_index`.  Callers establish window
/// saturation by comparing two window sizes.
pub fn fig8_index(s0: &[i128; 6], order: i128, k_hi: i128) -> Poly {
    const E0: [i128; 6] = [2, 1, 0, 2, 1, 0];
    let mut total = Poly::zero(order);
    for k in -k_hi..=k_hi {
        let sk: [i128; 6] = std::array::from_fn(|i| k * E0[i]);
        let pref = 2 * k + omega6(s0, &sk);
        let arg: [i128; 6] = std::array::from_fn(|i| sk[i] - s0[i]);
        // small fixed slack: every J factor here has nonnegative leading
        // exponent (each triple has a nonpositive minimum entry)
        let slack = 8;
        let f1 = j(arg[0], arg[1], arg[2], order + slack);
        let f2 = j(arg[3], arg[4], arg[5], order + slack);
        let prod = f1.mul(&f2);
        let shifted = Poly {
            offset: prod.offset + pref,
            coeffs: prod.coeffs.clone(),
            order,
        };
        let mut t = shifted;
        t.trim();
        total = total.add(&t);
    }
    total
}
