use tenv_bench::{f2, rational_sets, symbolic_sets};
use tenv_core::backend::RegularCategory;
use tenv_core::scalar::Rational;

#[test]
fn fixtures_have_expected_sizes() {
    assert_eq!(symbolic_sets().hom_basis(2, 2).unwrap().dim(), 15);
    assert_eq!(f2().subobjects(2).unwrap().len(), 5);
    let env = rational_sets(Rational::from_integer(3));
    assert_eq!(env.dimension(2).unwrap(), Rational::from_integer(9));
}
