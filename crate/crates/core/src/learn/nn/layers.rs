use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::Param;
use crate::util::{dot, fnv1a, sigmoid, softmax, Rng};

/// `y = W x + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linear {
    pub w: Param,
    pub b: Param,
}

impl Linear {
    pub fn new(input: usize, output: usize, rng: &mut Rng) -> Self {
        Linear {
            w: Param::glorot(output, input, rng),
            b: Param::zeros(1, output),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.w.cols
    }

    pub fn output_dim(&self) -> usize {
        self.w.rows
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.w.matvec(x);
        for (yi, bi) in y.iter_mut().zip(&self.b.value) {
            *yi += bi;
        }
        y
    }

    pub fn backward(&mut self, x: &[f64], dy: &[f64]) -> Vec<f64> {
        self.w.accumulate_outer(dy, x);
        self.b.accumulate(dy);
        self.w.matvec_t(dy)
    }

    pub fn params_mut(&mut self) -> Vec<&mut Param> {
        vec![&mut self.w, &mut self.b]
    }
}

/// Lookup table of dense rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub table: Param,
}

impl Embedding {
    pub fn new(vocab: usize, dim: usize, rng: &mut Rng) -> Self {
        let mut table = Param::glorot(vocab, dim, rng);
        table.value.iter_mut().for_each(|v| *v *= 0.5);
        Embedding { table }
    }

    pub fn dim(&self) -> usize {
        self.table.cols
    }

    pub fn forward(&self, ids: &[usize]) -> Vec<Vec<f64>> {
        ids.iter().map(|&i| self.table.row(i).to_vec()).collect()
    }

    pub fn backward(&mut self, ids: &[usize], dys: &[Vec<f64>]) {
        let d = self.table.cols;
        for (&i, dy) in ids.iter().zip(dys) {
            for (g, v) in self.table.grad[i * d..(i + 1) * d].iter_mut().zip(dy) {
                *g += v;
            }
        }
    }
}

/// Mean of hashed unigram and bigram rows. Hashes are salted with the segment
/// id, so the same word in the target and in its context lands in different buckets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NgramAverage {
    pub table: Param,
    pub max_ngram: usize,
}

impl NgramAverage {
    pub fn new(buckets: usize, dim: usize, max_ngram: usize, rng: &mut Rng) -> Self {
        let mut table = Param::glorot(buckets, dim, rng);
        table.value.iter_mut().for_each(|v| *v *= 0.5);
        NgramAverage {
            table,
            max_ngram: max_ngram.max(1),
        }
    }

    pub fn buckets(&self) -> usize {
        self.table.rows
    }

    /// Bucket ids of every n-gram up to `max_ngram` that stays inside one segment.
    pub fn bucket_ids(&self, tokens: &[u64], segments: &[u8]) -> Vec<usize> {
        let buckets = self.buckets() as u64;
        let mut out = Vec::new();
        for n in 1..=self.max_ngram {
            for start in 0..tokens.len().saturating_sub(n - 1) {
                let seg = segments[start];
                if segments[start..start + n].iter().any(|&s| s != seg) {
                    continue;
                }
                let mut bytes = Vec::with_capacity(8 * n);
                for t in &tokens[start..start + n] {
                    bytes.extend_from_slice(&t.to_le_bytes());
                }
                let h = fnv1a(&bytes, u64::from(seg) * 0x9e37_79b9 + n as u64);
                out.push((h % buckets) as usize);
            }
        }
        out
    }

    pub fn forward(&self, ids: &[usize]) -> Vec<f64> {
        let d = self.table.cols;
        let mut out = vec![0.0; d];
        if ids.is_empty() {
            return out;
        }
        let scale = 1.0 / ids.len() as f64;
        for &i in ids {
            for (o, v) in out.iter_mut().zip(self.table.row(i)) {
                *o += v * scale;
            }
        }
        out
    }

    pub fn backward(&mut self, ids: &[usize], dy: &[f64]) {
        if ids.is_empty() {
            return;
        }
        let d = self.table.cols;
        let scale = 1.0 / ids.len() as f64;
        for &i in ids {
            for (g, v) in self.table.grad[i * d..(i + 1) * d].iter_mut().zip(dy) {
                *g += v * scale;
            }
        }
    }
}

/// Gated recurrent unit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GruCell {
    pub wz: Param,
    pub wr: Param,
    pub wn: Param,
    pub uz: Param,
    pub ur: Param,
    pub un: Param,
    pub bz: Param,
    pub br: Param,
    pub bn: Param,
}

#[derive(Clone, Debug)]
pub struct GruCache {
    x: Vec<f64>,
    h: Vec<f64>,
    z: Vec<f64>,
    r: Vec<f64>,
    n: Vec<f64>,
    rh: Vec<f64>,
}

impl GruCell {
    pub fn new(input: usize, hidden: usize, rng: &mut Rng) -> Self {
        GruCell {
            wz: Param::glorot(hidden, input, rng),
            wr: Param::glorot(hidden, input, rng),
            wn: Param::glorot(hidden, input, rng),
            uz: Param::glorot(hidden, hidden, rng),
            ur: Param::glorot(hidden, hidden, rng),
            un: Param::glorot(hidden, hidden, rng),
            bz: Param::zeros(1, hidden),
            br: Param::zeros(1, hidden),
            bn: Param::zeros(1, hidden),
        }
    }

    pub fn hidden(&self) -> usize {
        self.uz.rows
    }

    pub fn input_dim(&self) -> usize {
        self.wz.cols
    }

    pub fn forward(&self, x: &[f64], h: &[f64]) -> (Vec<f64>, GruCache) {
        let gate = |w: &Param, u: &Param, b: &Param, hv: &[f64]| -> Vec<f64> {
            let a = w.matvec(x);
            let c = u.matvec(hv);
            a.iter()
                .zip(&c)
                .zip(&b.value)
                .map(|((a, c), b)| a + c + b)
                .collect()
        };
        let z: Vec<f64> = gate(&self.wz, &self.uz, &self.bz, h).into_iter().map(sigmoid).collect();
        let r: Vec<f64> = gate(&self.wr, &self.ur, &self.br, h).into_iter().map(sigmoid).collect();
        let rh: Vec<f64> = r.iter().zip(h).map(|(a, b)| a * b).collect();
        let n: Vec<f64> = gate(&self.wn, &self.un, &self.bn, &rh).into_iter().map(libm::tanh).collect();
        let out = (0..h.len()).map(|i| (1.0 - z[i]) * n[i] + z[i] * h[i]).collect();
        (
            out,
            GruCache {
                x: x.to_vec(),
                h: h.to_vec(),
                z,
                r,
                n,
                rh,
            },
        )
    }

    /// Returns `(dx, dh_prev)`.
    pub fn backward(&mut self, c: &GruCache, dout: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let hd = c.h.len();
        let mut dh: Vec<f64> = (0..hd).map(|i| dout[i] * c.z[i]).collect();
        let da_n: Vec<f64> = (0..hd)
            .map(|i| dout[i] * (1.0 - c.z[i]) * (1.0 - c.n[i] * c.n[i]))
            .collect();
        let da_z: Vec<f64> = (0..hd)
            .map(|i| dout[i] * (c.h[i] - c.n[i]) * c.z[i] * (1.0 - c.z[i]))
            .collect();
        let drh = self.un.matvec_t(&da_n);
        let da_r: Vec<f64> = (0..hd)
            .map(|i| drh[i] * c.h[i] * c.r[i] * (1.0 - c.r[i]))
            .collect();
        for i in 0..hd {
            dh[i] += drh[i] * c.r[i];
        }

        self.wn.accumulate_outer(&da_n, &c.x);
        self.un.accumulate_outer(&da_n, &c.rh);
        self.bn.accumulate(&da_n);
        self.wz.accumulate_outer(&da_z, &c.x);
        self.uz.accumulate_outer(&da_z, &c.h);
        self.bz.accumulate(&da_z);
        self.wr.accumulate_outer(&da_r, &c.x);
        self.ur.accumulate_outer(&da_r, &c.h);
        self.br.accumulate(&da_r);

        let mut dx = self.wn.matvec_t(&da_n);
        for (a, b) in dx.iter_mut().zip(self.wz.matvec_t(&da_z)) {
            *a += b;
        }
        for (a, b) in dx.iter_mut().zip(self.wr.matvec_t(&da_r)) {
            *a += b;
        }
        for (a, b) in dh.iter_mut().zip(self.uz.matvec_t(&da_z)) {
            *a += b;
        }
        for (a, b) in dh.iter_mut().zip(self.ur.matvec_t(&da_r)) {
            *a += b;
        }
        (dx, dh)
    }

    pub fn params_mut(&mut self) -> Vec<&mut Param> {
        vec![
            &mut self.wz,
            &mut self.wr,
            &mut self.wn,
            &mut self.uz,
            &mut self.ur,
            &mut self.un,
            &mut self.bz,
            &mut self.br,
            &mut self.bn,
        ]
    }
}

/// Forward and backward GRUs over a sequence. Step outputs are `[h_fwd; h_bwd]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiGru {
    pub fwd: GruCell,
    pub bwd: GruCell,
}

#[derive(Clone, Debug)]
pub struct BiGruCache {
    fwd: Vec<GruCache>,
    bwd: Vec<GruCache>,
}

impl BiGru {
    pub fn new(input: usize, hidden: usize, rng: &mut Rng) -> Self {
        BiGru {
            fwd: GruCell::new(input, hidden, rng),
            bwd: GruCell::new(input, hidden, rng),
        }
    }

    pub fn output_dim(&self) -> usize {
        2 * self.fwd.hidden()
    }

    /// Step outputs and the final state `[h_fwd(T-1); h_bwd(0)]`.
    pub fn forward(&self, xs: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>, BiGruCache) {
        let hd = self.fwd.hidden();
        let t = xs.len();
        let mut hf = vec![vec![0.0; hd]; t];
        let mut hb = vec![vec![0.0; hd]; t];
        let mut cf = Vec::with_capacity(t);
        let mut cb = Vec::with_capacity(t);
        let mut h = vec![0.0; hd];
        for (i, x) in xs.iter().enumerate() {
            let (next, c) = self.fwd.forward(x, &h);
            cf.push(c);
            hf[i] = next.clone();
            h = next;
        }
        let mut h = vec![0.0; hd];
        for i in (0..t).rev() {
            let (next, c) = self.bwd.forward(&xs[i], &h);
            cb.push(c);
            hb[i] = next.clone();
            h = next;
        }
        cb.reverse();
        let outputs: Vec<Vec<f64>> = (0..t)
            .map(|i| {
                let mut o = hf[i].clone();
                o.extend_from_slice(&hb[i]);
                o
            })
            .collect();
        let mut last = if t > 0 { hf[t - 1].clone() } else { vec![0.0; hd] };
        last.extend(if t > 0 { hb[0].clone() } else { vec![0.0; hd] });
        (outputs, last, BiGruCache { fwd: cf, bwd: cb })
    }

    /// Gradients for every step input, given gradients on the step outputs and the final state.
    pub fn backward(&mut self, c: &BiGruCache, douts: &[Vec<f64>], dlast: &[f64]) -> Vec<Vec<f64>> {
        let hd = self.fwd.hidden();
        let t = c.fwd.len();
        let mut dxs = vec![vec![0.0; self.fwd.input_dim()]; t];
        let mut carry = dlast[..hd].to_vec();
        for i in (0..t).rev() {
            let dout: Vec<f64> = (0..hd).map(|j| carry[j] + douts[i][j]).collect();
            let (dx, dh) = self.fwd.backward(&c.fwd[i], &dout);
            dxs[i] = dx;
            carry = dh;
        }
        let mut carry = dlast[hd..].to_vec();
        for i in 0..t {
            let dout: Vec<f64> = (0..hd).map(|j| carry[j] + douts[i][hd + j]).collect();
            let (dx, dh) = self.bwd.backward(&c.bwd[i], &dout);
            for (a, b) in dxs[i].iter_mut().zip(dx) {
                *a += b;
            }
            carry = dh;
        }
        dxs
    }

    pub fn params_mut(&mut self) -> Vec<&mut Param> {
        let mut p = self.fwd.params_mut();
        p.extend(self.bwd.params_mut());
        p
    }
}

/// Softmax attention with a learned query: `Σ_t α_t v_t`, `α = softmax(v_t · q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttentionPool {
    pub query: Param,
}

#[derive(Clone, Debug)]
pub struct AttentionCache {
    pub alpha: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl AttentionPool {
    pub fn new(dim: usize, rng: &mut Rng) -> Self {
        AttentionPool {
            query: Param::glorot(1, dim, rng),
        }
    }

    pub fn dim(&self) -> usize {
        self.query.cols
    }

    /// An empty input pools to zeros.
    pub fn forward(&self, values: &[Vec<f64>]) -> (Vec<f64>, AttentionCache) {
        let d = self.dim();
        let q = &self.query.value;
        let scores: Vec<f64> = values.iter().map(|v| dot(v, q)).collect();
        let alpha = if values.is_empty() { Vec::new() } else { softmax(&scores) };
        let mut pooled = vec![0.0; d];
        for (a, v) in alpha.iter().zip(values) {
            for (p, x) in pooled.iter_mut().zip(v) {
                *p += a * x;
            }
        }
        (
            pooled,
            AttentionCache {
                alpha,
                values: values.to_vec(),
            },
        )
    }

    pub fn backward(&mut self, c: &AttentionCache, g: &[f64]) -> Vec<Vec<f64>> {
        let q = self.query.value.clone();
        let da: Vec<f64> = c.values.iter().map(|v| dot(g, v)).collect();
        let mean: f64 = c.alpha.iter().zip(&da).map(|(a, d)| a * d).sum();
        let mut dq = vec![0.0; q.len()];
        let mut dvs = Vec::with_capacity(c.values.len());
        for ((v, &a), &d) in c.values.iter().zip(&c.alpha).zip(&da) {
            let ds = a * (d - mean);
            for (dqi, vi) in dq.iter_mut().zip(v) {
                *dqi += ds * vi;
            }
            dvs.push(g.iter().zip(&q).map(|(gi, qi)| a * gi + ds * qi).collect());
        }
        self.query.accumulate(&dq);
        dvs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::seeded;

    #[test]
    fn attention_over_one_value_is_identity() {
        let att = AttentionPool::new(3, &mut seeded(2));
        let (p, c) = att.forward(&[vec![1.0, -2.0, 0.5]]);
        assert_eq!(p, vec![1.0, -2.0, 0.5]);
        assert_eq!(c.alpha, vec![1.0]);
        let (z, _) = att.forward(&[]);
        assert_eq!(z, vec![0.0; 3]);
    }

    #[test]
    fn segment_salt_separates_buckets() {
        let ng = NgramAverage::new(1 << 16, 4, 2, &mut seeded(0));
        let a = ng.bucket_ids(&[7, 8], &[0, 0]);
        let b = ng.bucket_ids(&[7, 8], &[1, 1]);
        assert_eq!(a.len(), 3);
        assert_ne!(a, b);
        // A bigram spanning two segments is skipped.
        assert_eq!(ng.bucket_ids(&[7, 8], &[0, 1]).len(), 2);
    }

    #[test]
    fn bigru_final_state_layout() {
        let g = BiGru::new(2, 3, &mut seeded(5));
        let xs = vec![vec![0.1, 0.2], vec![-0.3, 0.4], vec![0.5, 0.0]];
        let (outs, last, _) = g.forward(&xs);
        assert_eq!(&last[..3], &outs[2][..3]);
        assert_eq!(&last[3..], &outs[0][3..]);
    }
}
