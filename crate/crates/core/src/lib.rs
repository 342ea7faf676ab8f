pub mod f2lin;
pub mod complexes;
pub mod morse_blowup;
pub mod real_spinc;
pub mod index_grading;
pub mod seifert_hmr;
