pub mod cpn;
pub mod roots;
pub mod sphere;
