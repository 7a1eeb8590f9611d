//! Minimal feed-forward networks with analytic gradients.
//!
//! Every actor, critic, target critic, and anchor in the ensemble is one of
//! these: a stack of affine layers with ReLU on the hidden layers and a linear
//! output. Parameters live in one flat `Vec<f64>`, grouped per layer as
//! row-major weights followed by biases, which keeps cloning, hashing, EMA
//! blending, and checkpointing trivial.
//!
//! There is no autodiff graph; [`Network::backward`] differentiates the fixed
//! MLP composition directly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonlinearity applied to hidden layers. The output layer is always affine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Relu,
}

/// Architecture of a [`Network`]: dimensions plus the hidden activation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub hidden_dims: Vec<usize>,
    pub output_dim: usize,
    pub activation: Activation,
}

impl NetworkSpec {
    pub fn new(input_dim: usize, hidden_dims: Vec<usize>, output_dim: usize) -> Result<Self> {
        if input_dim == 0 || output_dim == 0 || hidden_dims.iter().any(|&d| d == 0) {
            return Err(Error::Config("network dimensions must be >= 1".into()));
        }
        Ok(Self {
            input_dim,
            hidden_dims,
            output_dim,
            activation: Activation::Relu,
        })
    }

    /// (fan_in, fan_out) for each affine layer, input to output.
    pub fn layer_dims(&self) -> Vec<(usize, usize)> {
        let mut dims = Vec::with_capacity(self.hidden_dims.len() + 1);
        let mut fan_in = self.input_dim;
        for &h in &self.hidden_dims {
            dims.push((fan_in, h));
            fan_in = h;
        }
        dims.push((fan_in, self.output_dim));
        dims
    }

    /// Total parameter count: sum over layers of fan_in*fan_out + fan_out.
    pub fn param_count(&self) -> usize {
        self.layer_dims().iter().map(|&(i, o)| i * o + o).sum()
    }
}

/// A feed-forward function approximator with optional freeze protection.
///
/// A frozen network rejects every mutating operation; anchors rely on this to
/// stay bit-identical for their whole lifetime.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Network {
    spec: NetworkSpec,
    params: Vec<f64>,
    frozen: bool,
}

impl Network {
    /// Builds a network with uniform(-1/sqrt(fan_in), +1/sqrt(fan_in))
    /// weights and biases per layer. Same spec + same RNG state gives
    /// bit-identical parameters.
    pub fn init<R: Rng>(spec: NetworkSpec, rng: &mut R) -> Self {
        let mut params = Vec::with_capacity(spec.param_count());
        for (fan_in, fan_out) in spec.layer_dims() {
            let bound = 1.0 / (fan_in as f64).sqrt();
            for _ in 0..fan_in * fan_out + fan_out {
                params.push(rng.random_range(-bound..bound));
            }
        }
        Self {
            spec,
            params,
            frozen: false,
        }
    }

    /// All-zero parameters; mostly useful for hand-constructed fixtures.
    pub fn zeros(spec: NetworkSpec) -> Self {
        let params = vec![0.0; spec.param_count()];
        Self {
            spec,
            params,
            frozen: false,
        }
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Overwrites all parameters. Fails on frozen networks or length mismatch.
    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if self.frozen {
            return Err(Error::FrozenNetwork);
        }
        if params.len() != self.params.len() {
            return Err(Error::Shape(format!(
                "expected {} parameters, got {}",
                self.params.len(),
                params.len()
            )));
        }
        self.params.copy_from_slice(params);
        Ok(())
    }

    /// Parameter-identical deep copy with the requested freeze flag.
    pub fn cloned(&self, freeze: bool) -> Self {
        Self {
            spec: self.spec.clone(),
            params: self.params.clone(),
            frozen: freeze,
        }
    }

    /// FNV-1a over the parameter bytes; constant iff the parameters are.
    pub fn param_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for p in &self.params {
            for b in p.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        h
    }

    /// Deterministic forward pass. Never mutates parameters.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.spec.input_dim {
            return Err(Error::Shape(format!(
                "input length {} does not match input_dim {}",
                x.len(),
                self.spec.input_dim
            )));
        }
        let dims = self.spec.layer_dims();
        let last = dims.len() - 1;
        let mut activ = x.to_vec();
        let mut offset = 0;
        for (l, &(fan_in, fan_out)) in dims.iter().enumerate() {
            let mut out = vec![0.0; fan_out];
            for (o, out_o) in out.iter_mut().enumerate() {
                let row = offset + o * fan_in;
                let mut sum = self.params[offset + fan_in * fan_out + o];
                for (i, &a) in activ.iter().enumerate() {
                    sum += self.params[row + i] * a;
                }
                *out_o = if l < last { sum.max(0.0) } else { sum };
            }
            offset += fan_in * fan_out + fan_out;
            activ = out;
        }
        Ok(activ)
    }

    /// Gradients of `upstream_grad . output` with respect to every parameter
    /// and the input. Gradients for frozen networks are never requested, so
    /// asking for them is treated as a mutation attempt.
    pub fn backward(&self, x: &[f64], upstream_grad: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.frozen {
            return Err(Error::FrozenNetwork);
        }
        if x.len() != self.spec.input_dim {
            return Err(Error::Shape(format!(
                "input length {} does not match input_dim {}",
                x.len(),
                self.spec.input_dim
            )));
        }
        if upstream_grad.len() != self.spec.output_dim {
            return Err(Error::Shape(format!(
                "upstream length {} does not match output_dim {}",
                upstream_grad.len(),
                self.spec.output_dim
            )));
        }

        let dims = self.spec.layer_dims();
        let last = dims.len() - 1;

        // Forward, caching pre-activations and layer inputs.
        let mut inputs: Vec<Vec<f64>> = Vec::with_capacity(dims.len());
        let mut pre_acts: Vec<Vec<f64>> = Vec::with_capacity(dims.len());
        let mut activ = x.to_vec();
        let mut offset = 0;
        for &(fan_in, fan_out) in &dims {
            inputs.push(activ.clone());
            let mut z = vec![0.0; fan_out];
            for (o, z_o) in z.iter_mut().enumerate() {
                let row = offset + o * fan_in;
                let mut sum = self.params[offset + fan_in * fan_out + o];
                for (i, &a) in activ.iter().enumerate() {
                    sum += self.params[row + i] * a;
                }
                *z_o = sum;
            }
            activ = z.iter().map(|&v| v.max(0.0)).collect();
            pre_acts.push(z);
            offset += fan_in * fan_out + fan_out;
        }

        let mut layer_offsets = Vec::with_capacity(dims.len());
        let mut acc = 0;
        for &(fan_in, fan_out) in &dims {
            layer_offsets.push(acc);
            acc += fan_in * fan_out + fan_out;
        }

        let mut param_grads = vec![0.0; self.params.len()];
        let mut d_out = upstream_grad.to_vec();
        for l in (0..dims.len()).rev() {
            let (fan_in, fan_out) = dims[l];
            let offset = layer_offsets[l];
            // dz = d_out masked by ReLU' on hidden layers, identity on output.
            let dz: Vec<f64> = if l < last {
                d_out
                    .iter()
                    .zip(&pre_acts[l])
                    .map(|(&d, &z)| if z > 0.0 { d } else { 0.0 })
                    .collect()
            } else {
                d_out.clone()
            };
            let mut d_in = vec![0.0; fan_in];
            for (o, &dz_o) in dz.iter().enumerate() {
                let row = offset + o * fan_in;
                param_grads[offset + fan_in * fan_out + o] = dz_o;
                for i in 0..fan_in {
                    param_grads[row + i] = dz_o * inputs[l][i];
                    d_in[i] += self.params[row + i] * dz_o;
                }
            }
            d_out = d_in;
        }
        Ok((param_grads, d_out))
    }
}

/// RMSProp state: one squared-gradient accumulator entry per parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerState {
    pub accum: Vec<f64>,
    pub learning_rate: f64,
    pub decay: f64,
    pub stabilizer: f64,
    /// Kept for configuration fidelity; the update rule runs with zero
    /// momentum and ignores this field.
    pub momentum: f64,
}

impl OptimizerState {
    pub fn new(param_count: usize, learning_rate: f64, decay: f64, stabilizer: f64) -> Self {
        Self {
            accum: vec![0.0; param_count],
            learning_rate,
            decay,
            stabilizer,
            momentum: 0.0,
        }
    }
}

/// One RMSProp step: s <- decay*s + (1-decay)*g^2, then
/// theta <- theta - lr * g / sqrt(s + eps), elementwise.
///
/// Any non-finite gradient component aborts the step with both the network
/// and the optimizer state untouched.
pub fn rmsprop_step(net: &mut Network, grads: &[f64], state: &mut OptimizerState) -> Result<()> {
    if net.frozen {
        return Err(Error::FrozenNetwork);
    }
    if grads.len() != net.params.len() || state.accum.len() != net.params.len() {
        return Err(Error::Shape(format!(
            "gradient/accumulator length must be {}",
            net.params.len()
        )));
    }
    if grads.iter().any(|g| !g.is_finite()) {
        return Err(Error::Numeric("gradient".into()));
    }
    for ((p, s), &g) in net.params.iter_mut().zip(&mut state.accum).zip(grads) {
        *s = state.decay * *s + (1.0 - state.decay) * g * g;
        *p -= state.learning_rate * g / (*s + state.stabilizer).sqrt();
    }
    Ok(())
}

/// EMA blend of target toward online: theta' <- tau*theta + (1-tau)*theta'.
pub fn ema_update(target: &mut Network, online: &Network, tau: f64) -> Result<()> {
    if target.frozen {
        return Err(Error::FrozenNetwork);
    }
    if target.spec != online.spec {
        return Err(Error::Shape(
            "ema_update requires identical network specs".into(),
        ));
    }
    for (t, &o) in target.params.iter_mut().zip(&online.params) {
        *t = tau * o + (1.0 - tau) * *t;
    }
    Ok(())
}

/// Numerically stable softplus, used to read the uncertainty head.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Inverse of [`softplus`] for hand-constructed fixtures: y = ln(e^x - 1).
pub fn softplus_inv(y: f64) -> f64 {
    (y.exp() - 1.0).ln()
}
