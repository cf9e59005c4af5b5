fn main() {
    println!("nbpas");
}
