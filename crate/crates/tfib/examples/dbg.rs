use tfib::lattice::*;
use tfib::monodromy::normal_form_t11;

fn main() {
    let tuple = normal_form_t11(0);
    let dual: Vec<IntMatrix> = tuple.iter().map(|t| transpose_inverse(t).unwrap()).collect();
    let id = IntMatrix::identity(3);
    let diffs: Vec<IntMatrix> = dual.iter().map(|t| t.sub(&id)).collect();
    let fixed = kernel_saturated(&IntMatrix::vstack(&diffs));
    println!("fixed: {:?}", fixed);
    let tdiffs: Vec<IntMatrix> = dual.iter().map(|t| t.transpose().sub(&id)).collect();
    let cofixed = kernel_saturated(&IntMatrix::vstack(&tdiffs));
    println!("cofixed: {:?}", cofixed);
    // flag: f1, plane = ker w
    let w = &cofixed[0];
    let mut wrow = IntMatrix::zero(1, 3);
    for (i, c) in w.coords().iter().enumerate() { wrow.set(0, i, c.clone()); }
    let plane = kernel_saturated(&wrow);
    println!("plane: {:?}", plane);
    let base = IntMatrix::from_cols(&[fixed[0].clone(), plane[0].clone(), plane[1].clone()]);
    println!("base det-ish cols: {:?}", base);
}
