//! Turn catalog descriptors into live objects.

use crate::config::Config;
use crate::conjugate::associated_matrix;
use crate::error::Result;
use crate::families::{FamilyDescriptor, MatrixFamily, SequenceFamily, WeightFamily};
use crate::matrix::{IndexDomain, MatrixGenerator, WeightMatrix};
use crate::sequence::WeightSequence;
use crate::weightfn::WeightFunction;

#[derive(Debug, Clone)]
pub enum Instance {
    Sequence(WeightSequence),
    Weight(WeightFunction),
    Matrix(WeightMatrix),
}

pub fn instantiate(desc: &FamilyDescriptor, len: usize, cfg: &Config) -> Result<Instance> {
    desc.validate()?;
    Ok(match desc {
        FamilyDescriptor::Sequence(f) => {
            Instance::Sequence(WeightSequence::from_family(f.clone(), len, cfg)?)
        }
        FamilyDescriptor::Weight(f) => Instance::Weight(WeightFunction::ClosedForm(f.clone())),
        FamilyDescriptor::Matrix(mf) => Instance::Matrix(instantiate_matrix(mf, len, cfg)?),
    })
}

pub fn instantiate_matrix(mf: &MatrixFamily, len: usize, cfg: &Config) -> Result<WeightMatrix> {
    mf.validate()?;
    match mf {
        MatrixFamily::GevreyMatrix { xs } => {
            let entries = xs
                .iter()
                .map(|&x| {
                    WeightSequence::from_family(SequenceFamily::Gevrey { s: x }, len, cfg)
                        .map(|s| (x, s))
                })
                .collect::<Result<Vec<_>>>()?;
            WeightMatrix::new(entries, Some(MatrixGenerator::GevreyPowers), IndexDomain::Unbounded)
        }
        MatrixFamily::Bmt { weight, lmin, lmax } => {
            let w = WeightFunction::ClosedForm(weight.clone());
            let l_grid: Vec<f64> = (*lmin..=*lmax).map(|k| (k as f64).exp2()).collect();
            associated_matrix(&w, &l_grid, len, cfg)?.into_weight_matrix(&w)
        }
        MatrixFamily::Singleton { of } => {
            Ok(WeightMatrix::singleton(WeightSequence::from_family(of.clone(), len, cfg)?))
        }
        MatrixFamily::Chain { ks } => {
            let entries = ks
                .iter()
                .map(|&k| {
                    let fam = if k == 0 {
                        SequenceFamily::Gevrey { s: 1.0 }
                    } else {
                        SequenceFamily::GeomShift {
                            c: (k as f64).exp2(),
                            of: Box::new(SequenceFamily::Gevrey { s: 1.0 }),
                        }
                    };
                    WeightSequence::from_family(fam, len, cfg).map(|s| (k as f64, s))
                })
                .collect::<Result<Vec<_>>>()?;
            WeightMatrix::new(entries, None, IndexDomain::Sampled)
        }
    }
}

/// Weight function attached to a sequence family descriptor, materialized to
/// a workable quotient horizon.
pub fn associated_weight_of(f: &SequenceFamily, len: usize, cfg: &Config) -> Result<WeightFunction> {
    let seq = WeightSequence::from_family(f.clone(), len, cfg)?;
    WeightFunction::associated(&seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{catalog_list, parse_family};
    use crate::sequence::check_lc;
    use crate::verdict::Verdict;
    use crate::weightfn::{check_omega0, check_omega1, check_omega3, check_omega4, check_omega6};

    #[test]
    fn every_catalog_descriptor_instantiates() {
        let cfg = Config::default();
        for d in catalog_list() {
            instantiate(&d, 64, &cfg).unwrap_or_else(|e| panic!("{}: {e}", d.id()));
        }
    }

    #[test]
    fn catalog_sequences_are_class_members() {
        let cfg = Config::default();
        for d in catalog_list() {
            if let Instance::Sequence(s) = instantiate(&d, 256, &cfg).unwrap() {
                assert_eq!(
                    check_lc(&s, &cfg).unwrap().verdict,
                    Verdict::True,
                    "{} should be a class member",
                    d.id()
                );
            }
        }
    }

    #[test]
    fn power_half_passes_all_weight_conditions() {
        let cfg = Config::default();
        let w = match instantiate(&parse_family("power:rho=0.5").unwrap(), 64, &cfg).unwrap() {
            Instance::Weight(w) => w,
            _ => unreachable!(),
        };
        assert_eq!(check_omega0(&w, &cfg).unwrap().verdict, Verdict::True);
        assert_eq!(check_omega1(&w, &cfg).unwrap().verdict, Verdict::True);
        assert_eq!(check_omega3(&w, &cfg).unwrap().verdict, Verdict::True);
        assert_eq!(check_omega4(&w, &cfg).unwrap().verdict, Verdict::True);
        assert_eq!(check_omega6(&w, &cfg).unwrap().verdict, Verdict::True);
    }

    #[test]
    fn gevrey_two_example_values() {
        let cfg = Config::default();
        let d = parse_family("gevrey:s=2").unwrap();
        if let Instance::Sequence(s) = instantiate(&d, 4, &cfg).unwrap() {
            assert!((s.log_m(2) - 2.0 * 2f64.ln()).abs() < 1e-12);
            assert!((s.log_m(3) - 2.0 * 6f64.ln()).abs() < 1e-12);
        } else {
            unreachable!()
        }
    }

    #[test]
    fn bmt_matrix_instantiates_with_unbounded_domain() {
        let cfg = Config::default();
        let m = instantiate_matrix(
            &MatrixFamily::Bmt { weight: WeightFamily::Power { rho: 0.5 }, lmin: -2, lmax: 2 },
            48,
            &cfg,
        )
        .unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(m.index_domain, IndexDomain::Unbounded);
        assert!(m.pointwise_ordered);
    }
}
