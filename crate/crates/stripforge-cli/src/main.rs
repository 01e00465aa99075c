fn main() {
    println!("stripforge");
}
