fn main() {
    use hypcurve::scalar::{Scalar, Mode};
    let z = Scalar::float_from_f64(0.0, 192);
    println!("mode of 0f: {:?}", z.mode());
    let one = Scalar::one();
    let p = z.mode().join(one.mode()).precision();
    println!("joined p = {}", p);
    let a = z.to_float(p);
    let b = one.to_float(p);
    println!("a = {}, b = {}", a, b);
    let _ = Mode::Exact;
}
