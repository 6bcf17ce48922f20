abstract class State {
    public abstract void activate();
}

abstract class Base extends State {
    public void activate() { }
}

class Idle extends Base {
    public static Idle Instance() { return null; }
    public void wake() { Busy.Instance().activate(); }
}

class Busy extends State {
    public static Busy Instance() { return null; }
    public void activate() { }
    public void sleep() { Idle.Instance().activate(); }
}
