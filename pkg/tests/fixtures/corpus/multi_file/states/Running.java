class Running extends State {
    Port port;
    public static Running Instance() { return null; }
    public void run(Event e) {
        switch (e) {
            case HALT:
                port.send(Event.HALTED);
                Idle.Instance().activate();
                break;
            case BOO:
                Ghost.Instance().activate();
        }
    }
}
