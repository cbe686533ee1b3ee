namespace contact3 {}
