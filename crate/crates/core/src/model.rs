use crate::interval::ParamInterval;
use crate::scalar::Scalar;

/// A ψ-function family `ψ(x, t)` on `X × Θ`.
///
/// The observation type is opaque: the solver only ever hands it back to
/// the model. Implementations are expected to satisfy the sign-change
/// property for single observations (positive left of `ϑ₁(x)`, negative
/// right of it); this is checked on demand, not at construction.
pub trait PsiModel<T: Scalar>: Sync {
    type Obs: Sync;

    /// Parameter interval Θ.
    fn theta(&self) -> ParamInterval<T>;

    fn psi(&self, x: &Self::Obs, t: T) -> T;

    /// Closed-form `∂ψ/∂t`, when known.
    fn d2psi(&self, _x: &Self::Obs, _t: T) -> Option<T> {
        None
    }

    /// Closed-form single-observation estimator `ϑ₁(x)`, when known.
    fn theta1_closed_form(&self, _x: &Self::Obs) -> Option<T> {
        None
    }

    /// Declares `t ↦ ψ(x, t)` continuous for every observation.
    fn is_continuous(&self) -> bool {
        false
    }

    /// Loss `ρ` with `ψ = −∂ρ/∂t`, when the model carries one.
    fn rho(&self, _x: &Self::Obs, _t: T) -> Option<T> {
        None
    }
}

impl<T: Scalar, M: PsiModel<T> + ?Sized> PsiModel<T> for &M {
    type Obs = M::Obs;

    fn theta(&self) -> ParamInterval<T> {
        (**self).theta()
    }
    fn psi(&self, x: &Self::Obs, t: T) -> T {
        (**self).psi(x, t)
    }
    fn d2psi(&self, x: &Self::Obs, t: T) -> Option<T> {
        (**self).d2psi(x, t)
    }
    fn theta1_closed_form(&self, x: &Self::Obs) -> Option<T> {
        (**self).theta1_closed_form(x)
    }
    fn is_continuous(&self) -> bool {
        (**self).is_continuous()
    }
    fn rho(&self, x: &Self::Obs, t: T) -> Option<T> {
        (**self).rho(x, t)
    }
}

/// Central-difference step used when no closed-form derivative is present.
pub fn fd_step<T: Scalar>(t: T) -> T {
    T::lit(1e-6) * (T::one() + t.abs())
}

/// `∂ψ/∂t` from the closed form, falling back to central differences.
pub fn d2psi_or_fd<T: Scalar, M: PsiModel<T> + ?Sized>(model: &M, x: &M::Obs, t: T) -> T {
    if let Some(d) = model.d2psi(x, t) {
        return d;
    }
    let h = fd_step(t);
    let th = model.theta();
    let (a, b) = (t - h, t + h);
    if th.contains(a) && th.contains(b) {
        (model.psi(x, b) - model.psi(x, a)) / (b - a)
    } else if th.contains(b) {
        (model.psi(x, b) - model.psi(x, t)) / h
    } else {
        (model.psi(x, t) - model.psi(x, a)) / h
    }
}

/// A model given by plain closures, handy for one-off ψ-functions.
pub struct FnModel<T, O, F> {
    theta: ParamInterval<T>,
    psi: F,
    continuous: bool,
    _obs: std::marker::PhantomData<fn(&O)>,
}

impl<T: Scalar, O, F: Fn(&O, T) -> T> FnModel<T, O, F> {
    pub fn new(theta: ParamInterval<T>, continuous: bool, psi: F) -> Self {
        FnModel { theta, psi, continuous, _obs: std::marker::PhantomData }
    }
}

impl<T: Scalar, O: Sync, F: Fn(&O, T) -> T + Sync> PsiModel<T> for FnModel<T, O, F> {
    type Obs = O;

    fn theta(&self) -> ParamInterval<T> {
        self.theta
    }
    fn psi(&self, x: &O, t: T) -> T {
        (self.psi)(x, t)
    }
    fn is_continuous(&self) -> bool {
        self.continuous
    }
}
