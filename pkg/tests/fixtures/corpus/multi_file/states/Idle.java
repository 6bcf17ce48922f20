class Idle extends State {
    public static Idle Instance() { return null; }
    public void activate() { }
    public void go() { Running.Instance().activate(); }
}
