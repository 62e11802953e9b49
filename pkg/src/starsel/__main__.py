from starsel.cli import main

main()
